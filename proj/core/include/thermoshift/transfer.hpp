#ifndef THERMOSHIFT_TRANSFER_HPP
#define THERMOSHIFT_TRANSFER_HPP

#include <memory>
#include <vector>

#include "thermoshift/locfun.hpp"
#include "thermoshift/markov_measure.hpp"
#include "thermoshift/perron.hpp"

namespace thermoshift {

// (L_phi f)(x) = sum over preimages y of x of e^{phi(y)} f(y).
// The result depends on max(depth(phi), depth(f), 2) - 1 leading symbols.
LocallyConstantFunction transfer_apply(const LocallyConstantFunction& phi,
                                       const LocallyConstantFunction& f);

// Matrix realization of L_phi on depth-m value tables.  Row nu, column eta:
// nonzero iff eta continues into nu (eta_2..eta_m = nu_1..nu_{m-1}), with
// weight e^{phi(eta)}.  Rows keep their entries in column order, which makes
// a matrix-vector product reproduce transfer_apply term for term.
class TransferMatrix {
 public:
  static TransferMatrix build(const MatrixPtr& m, const LocallyConstantFunction& phi,
                              int depth);

  int depth() const { return index_->depth(); }
  std::size_t size() const { return index_->size(); }
  const WordIndex& index() const { return *index_; }
  const MatrixPtr& matrix() const { return matrix_; }
  const LocallyConstantFunction& potential() const { return potential_; }

  double entry(std::size_t row, std::size_t col) const;

  void apply_to(const std::vector<double>& x, std::vector<double>& y) const;
  void transpose_apply_to(const std::vector<double>& x, std::vector<double>& y) const;

  LocallyConstantFunction apply(const LocallyConstantFunction& f) const;

 private:
  struct Entry {
    std::size_t col;
    double weight;
  };
  TransferMatrix(MatrixPtr m, std::shared_ptr<const WordIndex> idx,
                 LocallyConstantFunction phi, std::vector<std::vector<Entry>> rows)
      : matrix_(std::move(m)),
        index_(std::move(idx)),
        potential_(std::move(phi)),
        rows_(std::move(rows)) {}

  MatrixPtr matrix_;
  std::shared_ptr<const WordIndex> index_;
  LocallyConstantFunction potential_;
  std::vector<std::vector<Entry>> rows_;
};

// Ruelle-Perron-Frobenius data of L_phi: the spectral radius, the positive
// eigenfunction g normalized so the eigenmeasure integrates it to 1, and the
// eigenmeasure itself as a lazily extendable cylinder-mass table.
struct RpfData {
  double eigenvalue;
  LocallyConstantFunction eigenfunction;
  MarkovMeasure eigenmeasure;
  int iterations;
  double residual_right;
  double residual_left;
};

RpfData rpf(const MatrixPtr& m, const LocallyConstantFunction& phi,
            double tol = kDefaultEigTol, int max_iter = kDefaultMaxIter);

// Sup norm of (L_phi)^n a - (L_0)^n (a e^{phi_n}) with phi_n the Birkhoff sum;
// the two sides are the same operator applied two ways.
double power_identity_check(const LocallyConstantFunction& phi,
                            const LocallyConstantFunction& a, int n);

// Gaps || r^{-n} L_phi^n a - (integral of a) g ||_sup for n = 1..n_max.
// For primitive data these decay geometrically; tiny spectral gaps are the
// caller's to notice (ratios near 1 are reported, not rejected).
std::vector<double> convergence_profile(const LocallyConstantFunction& phi,
                                        const LocallyConstantFunction& a, int n_max,
                                        double tol = kDefaultEigTol,
                                        int max_iter = kDefaultMaxIter);

}  // namespace thermoshift

#endif
