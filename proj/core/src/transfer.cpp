#include "thermoshift/transfer.hpp"

#include <algorithm>
#include <cmath>

namespace thermoshift {

LocallyConstantFunction transfer_apply(const LocallyConstantFunction& phi,
                                       const LocallyConstantFunction& f) {
  if (!same_matrix(phi.matrix(), f.matrix()))
    throw Error(ErrorCode::MatrixMismatch, "potential and argument live on different shifts");
  const TransitionMatrix& m = *phi.matrix();
  const int out_depth = std::max({phi.depth(), f.depth(), 2}) - 1;
  WordIndex out(phi.matrix(), out_depth);
  std::vector<double> vals(out.size());
  Word extended;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Word& nu = out.word(i);
    double s = 0.0;
    for (int j = 1; j <= m.size(); ++j) {
      if (!m.entry(j, nu.front())) continue;
      extended.assign(1, j);
      extended.insert(extended.end(), nu.begin(), nu.end());
      s += std::exp(phi.evaluate(extended)) * f.evaluate(extended);
    }
    vals[i] = s;
  }
  return LocallyConstantFunction::from_table(phi.matrix(), out_depth, std::move(vals));
}

TransferMatrix TransferMatrix::build(const MatrixPtr& m, const LocallyConstantFunction& phi,
                                     int depth) {
  if (!same_matrix(m, phi.matrix()))
    throw Error(ErrorCode::MatrixMismatch, "potential lives on a different shift");
  if (depth < 2 || depth < phi.depth())
    throw Error(ErrorCode::DepthTooSmall,
                "matrix depth must be at least max(2, depth of the potential)");
  auto idx = std::make_shared<const WordIndex>(m, depth);
  std::vector<std::vector<Entry>> rows(idx->size());
  Word eta;
  for (std::size_t i = 0; i < idx->size(); ++i) {
    const Word& nu = idx->word(i);
    auto& row = rows[i];
    for (int j = 1; j <= m->size(); ++j) {
      if (!m->entry(j, nu.front())) continue;
      eta.assign(1, j);
      eta.insert(eta.end(), nu.begin(), nu.end() - 1);
      // eta is admissible: the first step was just checked and the rest is nu.
      row.push_back(Entry{idx->at(eta), std::exp(phi.evaluate(eta))});
    }
    // j ascends, so columns are already sorted (eta is ordered by its head).
  }
  return TransferMatrix(m, std::move(idx), phi, std::move(rows));
}

double TransferMatrix::entry(std::size_t row, std::size_t col) const {
  for (const Entry& e : rows_[row])
    if (e.col == col) return e.weight;
  return 0.0;
}

void TransferMatrix::apply_to(const std::vector<double>& x, std::vector<double>& y) const {
  y.resize(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    double s = 0.0;
    for (const Entry& e : rows_[i]) s += e.weight * x[e.col];
    y[i] = s;
  }
}

void TransferMatrix::transpose_apply_to(const std::vector<double>& x,
                                        std::vector<double>& y) const {
  y.assign(rows_.size(), 0.0);
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (const Entry& e : rows_[i]) y[e.col] += e.weight * x[i];
}

LocallyConstantFunction TransferMatrix::apply(const LocallyConstantFunction& f) const {
  LocallyConstantFunction g = f.promote(depth());
  std::vector<double> x(size()), y;
  for (std::size_t i = 0; i < size(); ++i) x[i] = g.value(i);
  apply_to(x, y);
  return LocallyConstantFunction::from_table(matrix_, depth(), std::move(y));
}

RpfData rpf(const MatrixPtr& m, const LocallyConstantFunction& phi, double tol,
            int max_iter) {
  const int depth = std::max(2, phi.depth());
  TransferMatrix T = TransferMatrix::build(m, phi, depth);
  const std::size_t dim = T.size();

  PowerResult right = power_iteration(
      dim, [&T](const std::vector<double>& x, std::vector<double>& y) { T.apply_to(x, y); },
      tol, max_iter);
  PowerResult left = power_iteration(
      dim,
      [&T](const std::vector<double>& x, std::vector<double>& y) {
        T.transpose_apply_to(x, y);
      },
      tol, max_iter);

  const double r = right.eigenvalue;
  if (!(r > 0)) throw Error(ErrorCode::NoConvergence, "nonpositive eigenvalue estimate");

  double usum = 0.0;
  for (double v : left.vec) usum += v;
  for (double& v : left.vec) v /= usum;

  double pairing = 0.0;
  for (std::size_t i = 0; i < dim; ++i) pairing += left.vec[i] * right.vec[i];
  if (!(pairing > 0))
    throw Error(ErrorCode::NoConvergence, "degenerate eigenvector pairing");
  std::vector<double> g(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    g[i] = right.vec[i] / pairing;
    if (!(g[i] > 0)) throw Error(ErrorCode::ContractViolation, "eigenfunction lost positivity");
    if (!(left.vec[i] > 0))
      throw Error(ErrorCode::ContractViolation, "eigenmeasure lost positivity");
  }

  std::vector<double> tmp;
  T.apply_to(g, tmp);
  double res_r = 0.0;
  for (std::size_t i = 0; i < dim; ++i) res_r = std::max(res_r, std::abs(tmp[i] - r * g[i]));
  T.transpose_apply_to(left.vec, tmp);
  double res_l = 0.0;
  for (std::size_t i = 0; i < dim; ++i)
    res_l = std::max(res_l, std::abs(tmp[i] - r * left.vec[i]));

  LocallyConstantFunction eigenfunction =
      LocallyConstantFunction::from_table(m, depth, std::move(g));
  MarkovMeasure measure = MarkovMeasure::from_base(m, depth, left.vec, r, phi,
                                                   "transfer eigenmeasure");
  return RpfData{r,
                 std::move(eigenfunction),
                 std::move(measure),
                 right.iterations + left.iterations,
                 res_r,
                 res_l};
}

double power_identity_check(const LocallyConstantFunction& phi,
                            const LocallyConstantFunction& a, int n) {
  if (n < 1) throw Error(ErrorCode::BadInput, "need n >= 1");
  LocallyConstantFunction lhs = a;
  for (int i = 0; i < n; ++i) lhs = transfer_apply(phi, lhs);

  LocallyConstantFunction zero = LocallyConstantFunction::constant(phi.matrix(), 0.0);
  LocallyConstantFunction rhs = a * exp_base(phi.birkhoff(n), std::exp(1.0));
  for (int i = 0; i < n; ++i) rhs = transfer_apply(zero, rhs);

  auto [x, y] = promote_pair(lhs, rhs);
  double gap = 0.0;
  for (std::size_t i = 0; i < x.table_size(); ++i)
    gap = std::max(gap, std::abs(x.value(i) - y.value(i)));
  return gap;
}

std::vector<double> convergence_profile(const LocallyConstantFunction& phi,
                                        const LocallyConstantFunction& a, int n_max,
                                        double tol, int max_iter) {
  if (n_max < 1) throw Error(ErrorCode::BadInput, "need n_max >= 1");
  RpfData data = rpf(phi.matrix(), phi, tol, max_iter);
  const double integral = expectation(data.eigenmeasure, a);
  LocallyConstantFunction limit = scale(data.eigenfunction, integral);

  std::vector<double> gaps;
  gaps.reserve(n_max);
  LocallyConstantFunction f = a;
  double scale_factor = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    f = transfer_apply(phi, f);
    scale_factor /= data.eigenvalue;
    auto [x, y] = promote_pair(scale(f, scale_factor), limit);
    double gap = 0.0;
    for (std::size_t i = 0; i < x.table_size(); ++i)
      gap = std::max(gap, std::abs(x.value(i) - y.value(i)));
    gaps.push_back(gap);
  }
  return gaps;
}

}  // namespace thermoshift
