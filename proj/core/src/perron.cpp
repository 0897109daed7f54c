#include "thermoshift/perron.hpp"

#include <cmath>
#include <limits>

namespace thermoshift {

PowerResult power_iteration(
    std::size_t dim,
    const std::function<void(const std::vector<double>&, std::vector<double>&)>& matvec,
    double tol, int max_iter) {
  if (dim == 0) throw Error(ErrorCode::BadInput, "empty iteration space");
  if (!(tol > 0)) throw Error(ErrorCode::BadInput, "tolerance must be positive");

  std::vector<double> v(dim, 1.0), mv(dim);
  double est = std::numeric_limits<double>::quiet_NaN();
  double prev1 = std::numeric_limits<double>::infinity();
  double prev2 = std::numeric_limits<double>::infinity();
  double step1 = std::numeric_limits<double>::infinity();
  double step2 = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
  int polish_left = -1;

  for (int it = 1; it <= max_iter; ++it) {
    iterations = it;
    matvec(v, mv);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      num += v[i] * mv[i];
      den += v[i] * v[i];
    }
    double next = num / den;

    // v <- (v + M v) / sup, tracking the sup-norm step of the update.
    double sup = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      mv[i] += v[i];
      sup = std::max(sup, std::abs(mv[i]));
    }
    if (!(sup > 0) || !std::isfinite(sup))
      throw Error(ErrorCode::NoConvergence, "iteration vector degenerated");
    double step = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double next_v = mv[i] / sup;
      step = std::max(step, std::abs(next_v - v[i]));
      v[i] = next_v;
    }

    if (!converged) {
      if (std::abs(next - prev1) < tol && std::abs(next - prev2) < tol &&
          std::abs(prev1 - prev2) < tol) {
        converged = true;
        // The eigenvalue estimate settles before the vector does.  Keep
        // polishing until the vector update reaches the floating point
        // floor; each round is as cheap as a convergence test.
        polish_left = 400;
      }
      prev2 = prev1;
      prev1 = next;
      est = next;
    } else {
      est = next;
      // Stop at the noise floor: the step is tiny, or it grew above both of
      // the previous two (oscillation around the floor), or the budget ran
      // out for a genuinely slow tail.
      if (step <= 1e-15 || (step > step1 && step > step2) || --polish_left <= 0) break;
    }
    step2 = step1;
    step1 = step;
  }
  if (!converged)
    throw Error(ErrorCode::NoConvergence,
                "power iteration did not converge in " + std::to_string(max_iter) +
                    " iterations");
  return {est, std::move(v), iterations};
}

namespace {

double residual_sup(const std::vector<double>& v, const std::vector<double>& mv, double r) {
  double res = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) res = std::max(res, std::abs(mv[i] - r * v[i]));
  return res;
}

}  // namespace

PerronData perron(const TransitionMatrix& m, double tol, int max_iter) {
  const int n = m.size();
  const std::size_t dim = static_cast<std::size_t>(n);

  auto forward = [&m, n](const std::vector<double>& x, std::vector<double>& y) {
    for (int i = 1; i <= n; ++i) {
      double s = 0.0;
      for (int j = 1; j <= n; ++j)
        if (m.entry(i, j)) s += x[j - 1];
      y[i - 1] = s;
    }
  };
  auto backward = [&m, n](const std::vector<double>& x, std::vector<double>& y) {
    for (int j = 1; j <= n; ++j) {
      double s = 0.0;
      for (int i = 1; i <= n; ++i)
        if (m.entry(i, j)) s += x[i - 1];
      y[j - 1] = s;
    }
  };

  PowerResult right = power_iteration(dim, forward, tol, max_iter);
  PowerResult left = power_iteration(dim, backward, tol, max_iter);

  // Left vector as a probability-style weight vector.
  double lsum = 0.0;
  for (double x : left.vec) lsum += x;
  for (double& x : left.vec) x /= lsum;

  std::vector<double> tmp(dim);
  forward(right.vec, tmp);
  double res_r = residual_sup(right.vec, tmp, right.eigenvalue);
  backward(left.vec, tmp);
  double res_l = residual_sup(left.vec, tmp, right.eigenvalue);

  return PerronData{right.eigenvalue,
                    std::move(right.vec),
                    std::move(left.vec),
                    "sup-norm 1",
                    "entries sum to 1",
                    right.iterations + left.iterations,
                    res_r,
                    res_l};
}

double entropy(const TransitionMatrix& m, double tol, int max_iter) {
  return std::log(perron(m, tol, max_iter).eigenvalue);
}

}  // namespace thermoshift
