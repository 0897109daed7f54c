#ifndef THERMOSHIFT_KMS_HPP
#define THERMOSHIFT_KMS_HPP

#include <optional>

#include "thermoshift/transfer.hpp"

namespace thermoshift {

// Diagonal restriction of the gauge equilibrium state: closed form
// mass(w) = r^{-|w|} v_{last symbol of w} with M v = r v scaled so the
// symbol masses sum to 1.
MarkovMeasure gauge_kms(const MatrixPtr& m, double tol = kDefaultEigTol,
                        int max_iter = kDefaultMaxIter);

// Equilibrium measure of the generalized gauge action weighted by f at
// inverse temperature beta: the eigenmeasure of the transfer operator with
// potential (1 - f) log beta.
MarkovMeasure kms_measure(const MatrixPtr& m, const LocallyConstantFunction& f, double beta,
                          double tol = kDefaultEigTol, int max_iter = kDefaultMaxIter);

// Largest deviation |mu(L_phi chi_w) - beta mu(chi_w)| over cylinders of
// depth <= depth_bound, phi = (1 - f) log beta.  Zero (up to round-off) iff
// mu satisfies the equilibrium condition at this beta.
double kms_condition_check(const LocallyConstantFunction& f, double beta,
                           const MarkovMeasure& mu, int depth_bound);

struct BetaBracket {
  double lo;
  double hi;
};

struct KmsSolution {
  LocallyConstantFunction gauge_function;  // f
  double beta;
  LocallyConstantFunction potential;  // (1 - f) log beta
  MarkovMeasure measure;
  RpfData spectral;

  double log_beta() const;
};

// Solves log r((1 - f) log beta) = log beta by bisection.  For strictly
// positive f the default bracket is [1 + 1e-6, r^ceil(max f / min f)],
// expanded geometrically up to beta <= 1e6 if needed.  Otherwise a bracket
// must be supplied by the caller; without one the solver refuses (NoBracket)
// rather than guessing.
KmsSolution solve_beta(const MatrixPtr& m, const LocallyConstantFunction& f,
                       std::optional<BetaBracket> bracket = std::nullopt,
                       double root_tol = kDefaultRootTol, double eig_tol = kDefaultEigTol,
                       int max_iter = kDefaultMaxIter);

}  // namespace thermoshift

#endif
