#ifndef THERMOSHIFT_LOCFUN_HPP
#define THERMOSHIFT_LOCFUN_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "thermoshift/word.hpp"

namespace thermoshift {

enum class ValueKind { Integer, Real };

// A function on the shift space that only depends on the first `depth`
// symbols, stored as a value table over the admissible words of that length.
// Depth-m functions are the computational core of the library: potentials,
// cocycles and cylinder indicators are all of this form, and they are dense
// in the Hoelder classes (whose metric parameter therefore never appears in
// any table).  Integer-kind functions carry exact 64-bit integer entries and
// stay exact under the operations that preserve integrality; anything mixed
// coerces to real.
class LocallyConstantFunction {
 public:
  static LocallyConstantFunction constant(MatrixPtr m, double v);
  static LocallyConstantFunction constant(MatrixPtr m, std::int64_t v);
  static LocallyConstantFunction from_symbol_table(MatrixPtr m, const std::vector<double>& v);
  static LocallyConstantFunction from_symbol_table(MatrixPtr m, const std::vector<std::int64_t>& v);
  static LocallyConstantFunction from_table(MatrixPtr m, int depth, std::vector<double> v);
  static LocallyConstantFunction from_table(MatrixPtr m, int depth, std::vector<std::int64_t> v);
  // Indicator of the cylinder set of w (depth max(1, |w|)), integer kind.
  static LocallyConstantFunction indicator(MatrixPtr m, const Word& w);

  int depth() const { return index_->depth(); }
  ValueKind kind() const { return kind_; }
  const MatrixPtr& matrix() const { return index_->matrix(); }
  const WordIndex& index() const { return *index_; }
  std::size_t table_size() const { return index_->size(); }

  double value(std::size_t i) const {
    return kind_ == ValueKind::Real ? rvals_[i] : static_cast<double>(ivals_[i]);
  }
  std::int64_t ivalue(std::size_t i) const;

  // Value on the cylinder of w; w must be admissible and at least depth long.
  double evaluate(const Word& w) const;
  std::int64_t evaluate_int(const Word& w) const;

  LocallyConstantFunction promote(int new_depth) const;
  LocallyConstantFunction compose_shift() const;  // f after the shift, depth + 1
  // Birkhoff sum f(x) + f(sx) + ... + f(s^{n-1} x), depth + n - 1.
  LocallyConstantFunction birkhoff(int n) const;

  double sup_norm() const;
  double min_value() const;
  double max_value() const;

  friend LocallyConstantFunction operator+(const LocallyConstantFunction&,
                                           const LocallyConstantFunction&);
  friend LocallyConstantFunction operator-(const LocallyConstantFunction&,
                                           const LocallyConstantFunction&);
  friend LocallyConstantFunction operator*(const LocallyConstantFunction&,
                                           const LocallyConstantFunction&);

  bool same_table(const LocallyConstantFunction& other) const;

 private:
  LocallyConstantFunction(std::shared_ptr<const WordIndex> idx, ValueKind kind,
                          std::vector<double> rv, std::vector<std::int64_t> iv)
      : index_(std::move(idx)), kind_(kind), rvals_(std::move(rv)), ivals_(std::move(iv)) {}

  std::shared_ptr<const WordIndex> index_;
  ValueKind kind_;
  std::vector<double> rvals_;        // used when kind_ == Real
  std::vector<std::int64_t> ivals_;  // used when kind_ == Integer
};

LocallyConstantFunction scale(const LocallyConstantFunction& f, double s);
// b^f pointwise, b > 0; always real.
LocallyConstantFunction exp_base(const LocallyConstantFunction& f, double base);

// Promote both functions to a common depth (the larger of the two).
std::pair<LocallyConstantFunction, LocallyConstantFunction> promote_pair(
    const LocallyConstantFunction& a, const LocallyConstantFunction& b);

}  // namespace thermoshift

#endif
