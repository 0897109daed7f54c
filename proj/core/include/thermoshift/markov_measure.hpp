#ifndef THERMOSHIFT_MARKOV_MEASURE_HPP
#define THERMOSHIFT_MARKOV_MEASURE_HPP

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "thermoshift/locfun.hpp"

namespace thermoshift {

// Cylinder-mass table of a shift-space probability measure of Markov type:
// a base table on depth-m cylinders plus the eigenvalue relation
//   mass(w) = e^{phi(w)} / r * mass(w_2 ... w_k)   for |w| > m,
// which extends it to every depth.  Masses for depths below m aggregate the
// base level.  Levels are materialized lazily and never change once built;
// within each materialized level the Kolmogorov sums reproduce the parent
// masses bit for bit (the last child of each family absorbs the rounding
// residual, which moves it by at most a few ulps).
class MarkovMeasure {
 public:
  static MarkovMeasure from_base(MatrixPtr matrix, int base_depth,
                                 std::vector<double> base_masses, double eigenvalue,
                                 LocallyConstantFunction potential, std::string source_tag);

  // Mass of the cylinder of w; 0 for inadmissible words, 1 for the empty word.
  double mass(const Word& w) const;

  // Masses of all admissible words of one depth, aligned with the
  // lexicographic word table of that depth.
  std::vector<double> level(int depth) const;

  // All masses up to max_depth inclusive, shallow first.
  std::vector<std::pair<Word, double>> mass_table(int max_depth) const;

  const MatrixPtr& matrix() const;
  int base_depth() const;
  double eigenvalue() const;
  const LocallyConstantFunction& potential() const;
  const std::string& source_tag() const;

 private:
  struct State;
  explicit MarkovMeasure(std::shared_ptr<State> state) : state_(std::move(state)) {}
  std::shared_ptr<State> state_;
};

// Integral of a locally constant function against the measure: the value
// table paired with the mass table of the same depth.
double expectation(const MarkovMeasure& mu, const LocallyConstantFunction& f);

}  // namespace thermoshift

#endif
