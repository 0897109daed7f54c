#ifndef THERMOSHIFT_COE_HPP
#define THERMOSHIFT_COE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thermoshift/kms.hpp"
#include "thermoshift/substitution.hpp"

namespace thermoshift {

// Orbit-equivalence witness: a substitution code plus the four nonnegative
// integer return-time functions.  k1, l1 live on the source shift and
// control how h intertwines the two shift maps; k2, l2 play the mirror role
// for the decoded direction.
struct CoeWitness {
  SubstitutionCode code;
  LocallyConstantFunction k1, l1, k2, l2;

  static CoeWitness build(SubstitutionCode code, LocallyConstantFunction k1,
                          LocallyConstantFunction l1, LocallyConstantFunction k2,
                          LocallyConstantFunction l2);
};

// c_i = l_i - k_i as an exact integer function; side 1 lives on the source,
// side 2 on the target.
LocallyConstantFunction cocycle(const CoeWitness& w, int side);

struct VerifyViolation {
  int equation;  // 1: forward intertwining, 2: decoded direction
  Word word;
  std::string detail;
};

struct VerifyReport {
  bool passed;
  int depth;
  std::size_t words_checked;
  std::vector<VerifyViolation> violations;
};

// Checks both intertwining identities on every admissible word of the given
// depth, comparing the computable overlaps of the truncated orbits.  A
// failure is conclusive; a pass certifies the identities to this depth.
// threads > 1 splits the word enumeration by first symbol; the report is
// identical to the serial one.
VerifyReport verify_equivalence(const CoeWitness& w, int depth, int threads = 1);

struct Rational {
  std::int64_t num;
  std::int64_t den;  // > 0
};

// Solves c = kappa + b - b(shifted) for b, exactly, over the higher-block
// graph of c; returns nothing when the cohomological equation has no
// solution.  For integer kappa the witness b is integer-valued.
std::optional<LocallyConstantFunction> coboundary_solve(const LocallyConstantFunction& c,
                                                        Rational kappa);

struct CycleCertificate {
  Word cycle;
  std::int64_t cocycle_sum;
  int period;
};

struct ScoeResult {
  bool strongly_equivalent;
  std::optional<LocallyConstantFunction> coboundary;  // b1 when solvable
  std::optional<CycleCertificate> obstruction;        // violating orbit otherwise
};

// Strong orbit equivalence of the witnessed pair: decidable by solving
// c1 = 1 + b1 - b1(shifted).  The negative answer always carries a periodic
// orbit whose c1-sum differs from its period.
ScoeResult is_scoe(const CoeWitness& w);

struct EntropyLimitRow {
  int n;
  double value;             // E_n
  double entropy_estimate;  // -log(E_n)/n
  double scaled;            // r^n E_n with r the Perron value of the ambient shift
};

// E_n = integral of r_other^{-c^n} against the gauge measure of the ambient
// shift (side 1: source, side 2: target), computed through n transfer
// operator applications; cost is linear in n_max.
std::vector<EntropyLimitRow> entropy_limit_sequence(const CoeWitness& w, int side, int n_max,
                                                    double tol = kDefaultEigTol,
                                                    int max_iter = kDefaultMaxIter);

struct LimitConstants {
  std::vector<double> scaled;  // a_n = r^n E_n
  double limit;                // last computed a_n
  double tail_oscillation;     // spread of a_n over the final quarter
};

LimitConstants limit_constants(const CoeWitness& w, int side, int n_max,
                               double tol = kDefaultEigTol, int max_iter = kDefaultMaxIter);

// Built-in fixture: the full 2-shift against the golden mean shift, with the
// one-symbol-to-"21" substitution and its return times.
CoeWitness golden_example();

// Regression identity for the fixture's decoded-side counting function: the
// depth-1 follower sum with weight 2 per occurrence of symbol 2 against its
// closed form.  Returns the largest deviation, computed exactly (so 0.0).
double hn_check(int n);

// Best-effort bounded search for valid (k2, l2) tables of depth 1 with
// values in [0, max_value], verified at verify_depth.  Deterministic order;
// nothing is returned when no pair passes.
std::optional<std::pair<LocallyConstantFunction, LocallyConstantFunction>> search_return_times(
    const SubstitutionCode& code, int max_value, int verify_depth);

}  // namespace thermoshift

#endif
