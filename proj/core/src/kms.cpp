#include "thermoshift/kms.hpp"

#include <cmath>

namespace thermoshift {

MarkovMeasure gauge_kms(const MatrixPtr& m, double tol, int max_iter) {
  PerronData pd = perron(*m, tol, max_iter);
  const double r = pd.eigenvalue;
  // Scale the right eigenvector so the depth-1 masses v_j / r sum to 1.
  double sum = 0.0;
  for (double v : pd.right) sum += v;
  std::vector<double> base(pd.right.size());
  for (std::size_t j = 0; j < base.size(); ++j) base[j] = pd.right[j] / sum;
  return MarkovMeasure::from_base(m, 1, std::move(base), r,
                                  LocallyConstantFunction::constant(m, 0.0),
                                  "gauge closed form");
}

MarkovMeasure kms_measure(const MatrixPtr& m, const LocallyConstantFunction& f, double beta,
                          double tol, int max_iter) {
  if (!(beta > 0)) throw Error(ErrorCode::BadInput, "beta must be positive");
  LocallyConstantFunction phi =
      scale(LocallyConstantFunction::constant(m, 1.0) - f, std::log(beta));
  return rpf(m, phi, tol, max_iter).eigenmeasure;
}

double kms_condition_check(const LocallyConstantFunction& f, double beta,
                           const MarkovMeasure& mu, int depth_bound) {
  if (depth_bound < 0) throw Error(ErrorCode::BadInput, "negative depth bound");
  const MatrixPtr& m = mu.matrix();
  if (!same_matrix(m, f.matrix()))
    throw Error(ErrorCode::MatrixMismatch, "gauge function lives on a different shift");
  LocallyConstantFunction phi =
      scale(LocallyConstantFunction::constant(m, 1.0) - f, std::log(beta));
  double worst = 0.0;
  for (int d = 0; d <= depth_bound; ++d) {
    for (const Word& w : admissible_words(*m, d)) {
      LocallyConstantFunction chi = LocallyConstantFunction::indicator(m, w);
      double lhs = expectation(mu, transfer_apply(phi, chi));
      double rhs = beta * mu.mass(w);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

double KmsSolution::log_beta() const { return std::log(beta); }

KmsSolution solve_beta(const MatrixPtr& m, const LocallyConstantFunction& f,
                       std::optional<BetaBracket> bracket, double root_tol, double eig_tol,
                       int max_iter) {
  if (!same_matrix(m, f.matrix()))
    throw Error(ErrorCode::MatrixMismatch, "gauge function lives on a different shift");
  if (!(root_tol > 0)) throw Error(ErrorCode::BadInput, "tolerance must be positive");

  const LocallyConstantFunction one = LocallyConstantFunction::constant(m, 1.0);
  auto spectral_at = [&](double beta) {
    LocallyConstantFunction phi = scale(one - f, std::log(beta));
    return rpf(m, phi, eig_tol, max_iter);
  };
  auto F = [&](double beta) { return std::log(spectral_at(beta).eigenvalue) - std::log(beta); };

  constexpr double kBetaCap = 1e6;
  double lo, hi;
  if (bracket) {
    lo = bracket->lo;
    hi = bracket->hi;
    if (!(lo > 0) || !(hi > lo)) throw Error(ErrorCode::BadInput, "bad bracket");
  } else {
    const double fmin = f.min_value();
    const double fmax = f.max_value();
    if (!(fmin > 0))
      throw Error(ErrorCode::NoBracket,
                  "gauge function is not strictly positive; supply a bracket");
    const double r = perron(*m, eig_tol, max_iter).eigenvalue;
    lo = 1.0 + 1e-6;
    hi = std::pow(r, std::ceil(fmax / fmin));
    if (hi <= lo) hi = lo * 2;
  }

  double flo = F(lo), fhi = F(hi);
  if (std::abs(flo) <= root_tol) {
    RpfData data = spectral_at(lo);
    return KmsSolution{f, lo, data.eigenmeasure.potential(), data.eigenmeasure, data};
  }
  while (flo * fhi > 0) {
    if (!bracket && hi < kBetaCap) {
      hi = std::min(hi * 2, kBetaCap);
      fhi = F(hi);
      continue;
    }
    throw Error(ErrorCode::NoBracket, "no sign change on the bracket");
  }

  double beta = hi, fbeta = fhi;
  if (std::abs(fhi) > root_tol) {
    const int kMaxBisect = 200;
    int it = 0;
    for (; it < kMaxBisect; ++it) {
      beta = 0.5 * (lo + hi);
      fbeta = F(beta);
      if (std::abs(fbeta) <= root_tol) break;
      if (fbeta * flo < 0) {
        hi = beta;
      } else {
        lo = beta;
        flo = fbeta;
      }
    }
    if (std::abs(fbeta) > root_tol)
      throw Error(ErrorCode::NoConvergence, "bisection did not reach the root tolerance");
  }

  // Fixed-point polish beta <- r((1-f) log beta).  Near the root the update
  // contracts with factor 1 - mu(f) < 1, pushing the residual from the
  // bisection tolerance down to eigenvalue precision; stop as soon as a step
  // stops improving.
  const double polish_tol = std::max(10.0 * eig_tol, 1e-14);
  for (int i = 0; i < 30 && std::abs(fbeta) > polish_tol; ++i) {
    const double candidate = spectral_at(beta).eigenvalue;
    const double fcand = F(candidate);
    if (!(std::abs(fcand) < std::abs(fbeta))) break;
    beta = candidate;
    fbeta = fcand;
  }

  LocallyConstantFunction phi = scale(one - f, std::log(beta));
  RpfData data = rpf(m, phi, eig_tol, max_iter);
  return KmsSolution{f, beta, std::move(phi), data.eigenmeasure, data};
}

}  // namespace thermoshift
