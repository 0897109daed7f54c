#ifndef THERMOSHIFT_PERRON_HPP
#define THERMOSHIFT_PERRON_HPP

#include <functional>
#include <string>
#include <vector>

#include "thermoshift/transition_matrix.hpp"

namespace thermoshift {

inline constexpr double kDefaultEigTol = 1e-12;
inline constexpr double kDefaultRootTol = 1e-10;
inline constexpr int kDefaultMaxIter = 100000;

// Power iteration on I + M for a nonnegative irreducible M, starting from
// the all-ones vector.  The identity shift makes the iteration matrix
// primitive, so convergence needs no aperiodicity assumption.  Eigenvalue
// estimates are Rayleigh quotients; convergence is declared when three
// successive estimates agree within tol, after which a short polishing run
// continues while the estimate still moves.  The returned vector is
// positive with sup norm 1.
struct PowerResult {
  double eigenvalue;
  std::vector<double> vec;
  int iterations;
};

PowerResult power_iteration(
    std::size_t dim,
    const std::function<void(const std::vector<double>&, std::vector<double>&)>& matvec,
    double tol, int max_iter);

struct PerronData {
  double eigenvalue;
  std::vector<double> right;  // sup norm 1
  std::vector<double> left;   // entries sum to 1
  std::string right_normalization;
  std::string left_normalization;
  int iterations;
  double residual_right;  // sup norm of M v - r v
  double residual_left;   // sup norm of u M - r u
};

PerronData perron(const TransitionMatrix& m, double tol = kDefaultEigTol,
                  int max_iter = kDefaultMaxIter);

// Topological entropy log r.
double entropy(const TransitionMatrix& m, double tol = kDefaultEigTol,
               int max_iter = kDefaultMaxIter);

}  // namespace thermoshift

#endif
