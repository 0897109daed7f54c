#include "thermoshift/locfun.hpp"

#include <algorithm>
#include <cmath>

namespace thermoshift {

namespace {

std::shared_ptr<const WordIndex> shared_index(MatrixPtr m, int depth) {
  if (depth < 1) throw Error(ErrorCode::BadInput, "function depth must be at least 1");
  return std::make_shared<const WordIndex>(std::move(m), depth);
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw Error(ErrorCode::ContractViolation, "integer overflow in exact arithmetic");
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r))
    throw Error(ErrorCode::ContractViolation, "integer overflow in exact arithmetic");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw Error(ErrorCode::ContractViolation, "integer overflow in exact arithmetic");
  return r;
}

}  // namespace

LocallyConstantFunction LocallyConstantFunction::constant(MatrixPtr m, double v) {
  auto idx = shared_index(std::move(m), 1);
  std::vector<double> rv(idx->size(), v);
  return LocallyConstantFunction(std::move(idx), ValueKind::Real, std::move(rv), {});
}

LocallyConstantFunction LocallyConstantFunction::constant(MatrixPtr m, std::int64_t v) {
  auto idx = shared_index(std::move(m), 1);
  std::vector<std::int64_t> iv(idx->size(), v);
  return LocallyConstantFunction(std::move(idx), ValueKind::Integer, {}, std::move(iv));
}

LocallyConstantFunction LocallyConstantFunction::from_symbol_table(
    MatrixPtr m, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != m->size())
    throw Error(ErrorCode::BadInput, "symbol table size differs from alphabet size");
  auto idx = shared_index(std::move(m), 1);
  return LocallyConstantFunction(std::move(idx), ValueKind::Real, v, {});
}

LocallyConstantFunction LocallyConstantFunction::from_symbol_table(
    MatrixPtr m, const std::vector<std::int64_t>& v) {
  if (static_cast<int>(v.size()) != m->size())
    throw Error(ErrorCode::BadInput, "symbol table size differs from alphabet size");
  auto idx = shared_index(std::move(m), 1);
  return LocallyConstantFunction(std::move(idx), ValueKind::Integer, {}, v);
}

LocallyConstantFunction LocallyConstantFunction::from_table(MatrixPtr m, int depth,
                                                            std::vector<double> v) {
  auto idx = shared_index(std::move(m), depth);
  if (v.size() != idx->size())
    throw Error(ErrorCode::BadInput, "value table size differs from word count");
  return LocallyConstantFunction(std::move(idx), ValueKind::Real, std::move(v), {});
}

LocallyConstantFunction LocallyConstantFunction::from_table(MatrixPtr m, int depth,
                                                            std::vector<std::int64_t> v) {
  auto idx = shared_index(std::move(m), depth);
  if (v.size() != idx->size())
    throw Error(ErrorCode::BadInput, "value table size differs from word count");
  return LocallyConstantFunction(std::move(idx), ValueKind::Integer, {}, std::move(v));
}

LocallyConstantFunction LocallyConstantFunction::indicator(MatrixPtr m, const Word& w) {
  if (!is_admissible(*m, w)) throw Error(ErrorCode::NotAdmissible, "cylinder word");
  const int depth = std::max<int>(1, static_cast<int>(w.size()));
  auto idx = shared_index(std::move(m), depth);
  std::vector<std::int64_t> iv(idx->size(), 0);
  if (w.empty()) {
    std::fill(iv.begin(), iv.end(), 1);
  } else {
    iv[idx->at(w)] = 1;
  }
  return LocallyConstantFunction(std::move(idx), ValueKind::Integer, {}, std::move(iv));
}

std::int64_t LocallyConstantFunction::ivalue(std::size_t i) const {
  if (kind_ != ValueKind::Integer)
    throw Error(ErrorCode::KindMismatch, "integer access to a real-valued function");
  return ivals_[i];
}

double LocallyConstantFunction::evaluate(const Word& w) const {
  if (static_cast<int>(w.size()) < depth())
    throw Error(ErrorCode::WordTooShort,
                "need " + std::to_string(depth()) + " symbols, got " +
                    std::to_string(w.size()));
  if (!is_admissible(*matrix(), w)) throw Error(ErrorCode::NotAdmissible, "evaluation word");
  Word prefix(w.begin(), w.begin() + depth());
  return value(index_->at(prefix));
}

std::int64_t LocallyConstantFunction::evaluate_int(const Word& w) const {
  if (kind_ != ValueKind::Integer)
    throw Error(ErrorCode::KindMismatch, "integer access to a real-valued function");
  if (static_cast<int>(w.size()) < depth())
    throw Error(ErrorCode::WordTooShort,
                "need " + std::to_string(depth()) + " symbols, got " +
                    std::to_string(w.size()));
  if (!is_admissible(*matrix(), w)) throw Error(ErrorCode::NotAdmissible, "evaluation word");
  Word prefix(w.begin(), w.begin() + depth());
  return ivals_[index_->at(prefix)];
}

LocallyConstantFunction LocallyConstantFunction::promote(int new_depth) const {
  if (new_depth < depth())
    throw Error(ErrorCode::DepthTooSmall, "cannot demote a depth-" + std::to_string(depth()) +
                                              " function to depth " + std::to_string(new_depth));
  if (new_depth == depth()) return *this;
  auto idx = shared_index(matrix(), new_depth);
  const int d = depth();
  Word prefix;
  if (kind_ == ValueKind::Real) {
    std::vector<double> rv(idx->size());
    for (std::size_t i = 0; i < idx->size(); ++i) {
      const Word& w = idx->word(i);
      prefix.assign(w.begin(), w.begin() + d);
      rv[i] = rvals_[index_->at(prefix)];
    }
    return LocallyConstantFunction(std::move(idx), ValueKind::Real, std::move(rv), {});
  }
  std::vector<std::int64_t> iv(idx->size());
  for (std::size_t i = 0; i < idx->size(); ++i) {
    const Word& w = idx->word(i);
    prefix.assign(w.begin(), w.begin() + d);
    iv[i] = ivals_[index_->at(prefix)];
  }
  return LocallyConstantFunction(std::move(idx), ValueKind::Integer, {}, std::move(iv));
}

LocallyConstantFunction LocallyConstantFunction::compose_shift() const {
  auto idx = shared_index(matrix(), depth() + 1);
  const int d = depth();
  Word sub;
  if (kind_ == ValueKind::Real) {
    std::vector<double> rv(idx->size());
    for (std::size_t i = 0; i < idx->size(); ++i) {
      const Word& w = idx->word(i);
      sub.assign(w.begin() + 1, w.begin() + 1 + d);
      rv[i] = rvals_[index_->at(sub)];
    }
    return LocallyConstantFunction(std::move(idx), ValueKind::Real, std::move(rv), {});
  }
  std::vector<std::int64_t> iv(idx->size());
  for (std::size_t i = 0; i < idx->size(); ++i) {
    const Word& w = idx->word(i);
    sub.assign(w.begin() + 1, w.begin() + 1 + d);
    iv[i] = ivals_[index_->at(sub)];
  }
  return LocallyConstantFunction(std::move(idx), ValueKind::Integer, {}, std::move(iv));
}

LocallyConstantFunction LocallyConstantFunction::birkhoff(int n) const {
  if (n < 1) throw Error(ErrorCode::BadInput, "Birkhoff sum needs n >= 1");
  const int d = depth();
  const int out_depth = d + n - 1;
  auto idx = shared_index(matrix(), out_depth);
  Word window;
  if (kind_ == ValueKind::Real) {
    std::vector<double> rv(idx->size());
    for (std::size_t i = 0; i < idx->size(); ++i) {
      const Word& w = idx->word(i);
      double s = 0.0;
      for (int off = 0; off < n; ++off) {
        window.assign(w.begin() + off, w.begin() + off + d);
        s += rvals_[index_->at(window)];
      }
      rv[i] = s;
    }
    return LocallyConstantFunction(std::move(idx), ValueKind::Real, std::move(rv), {});
  }
  std::vector<std::int64_t> iv(idx->size());
  for (std::size_t i = 0; i < idx->size(); ++i) {
    const Word& w = idx->word(i);
    std::int64_t s = 0;
    for (int off = 0; off < n; ++off) {
      window.assign(w.begin() + off, w.begin() + off + d);
      s = checked_add(s, ivals_[index_->at(window)]);
    }
    iv[i] = s;
  }
  return LocallyConstantFunction(std::move(idx), ValueKind::Integer, {}, std::move(iv));
}

double LocallyConstantFunction::sup_norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < table_size(); ++i) s = std::max(s, std::abs(value(i)));
  return s;
}

double LocallyConstantFunction::min_value() const {
  double s = value(0);
  for (std::size_t i = 1; i < table_size(); ++i) s = std::min(s, value(i));
  return s;
}

double LocallyConstantFunction::max_value() const {
  double s = value(0);
  for (std::size_t i = 1; i < table_size(); ++i) s = std::max(s, value(i));
  return s;
}

bool LocallyConstantFunction::same_table(const LocallyConstantFunction& other) const {
  if (!same_matrix(matrix(), other.matrix()) || depth() != other.depth() ||
      kind_ != other.kind_)
    return false;
  return kind_ == ValueKind::Real ? rvals_ == other.rvals_ : ivals_ == other.ivals_;
}

std::pair<LocallyConstantFunction, LocallyConstantFunction> promote_pair(
    const LocallyConstantFunction& a, const LocallyConstantFunction& b) {
  if (!same_matrix(a.matrix(), b.matrix()))
    throw Error(ErrorCode::MatrixMismatch, "operands live on different shifts");
  const int d = std::max(a.depth(), b.depth());
  return {a.promote(d), b.promote(d)};
}

namespace {

enum class BinOp { Add, Sub, Mul };

LocallyConstantFunction binary(const LocallyConstantFunction& a,
                               const LocallyConstantFunction& b, BinOp op) {
  auto [fa, fb] = promote_pair(a, b);
  const std::size_t n = fa.table_size();
  if (fa.kind() == ValueKind::Integer && fb.kind() == ValueKind::Integer) {
    std::vector<std::int64_t> iv(n);
    for (std::size_t i = 0; i < n; ++i) {
      switch (op) {
        case BinOp::Add: iv[i] = checked_add(fa.ivalue(i), fb.ivalue(i)); break;
        case BinOp::Sub: iv[i] = checked_sub(fa.ivalue(i), fb.ivalue(i)); break;
        case BinOp::Mul: iv[i] = checked_mul(fa.ivalue(i), fb.ivalue(i)); break;
      }
    }
    return LocallyConstantFunction::from_table(fa.matrix(), fa.depth(), std::move(iv));
  }
  std::vector<double> rv(n);
  for (std::size_t i = 0; i < n; ++i) {
    switch (op) {
      case BinOp::Add: rv[i] = fa.value(i) + fb.value(i); break;
      case BinOp::Sub: rv[i] = fa.value(i) - fb.value(i); break;
      case BinOp::Mul: rv[i] = fa.value(i) * fb.value(i); break;
    }
  }
  return LocallyConstantFunction::from_table(fa.matrix(), fa.depth(), std::move(rv));
}

}  // namespace

LocallyConstantFunction operator+(const LocallyConstantFunction& a,
                                  const LocallyConstantFunction& b) {
  return binary(a, b, BinOp::Add);
}

LocallyConstantFunction operator-(const LocallyConstantFunction& a,
                                  const LocallyConstantFunction& b) {
  return binary(a, b, BinOp::Sub);
}

LocallyConstantFunction operator*(const LocallyConstantFunction& a,
                                  const LocallyConstantFunction& b) {
  return binary(a, b, BinOp::Mul);
}

LocallyConstantFunction scale(const LocallyConstantFunction& f, double s) {
  std::vector<double> rv(f.table_size());
  for (std::size_t i = 0; i < rv.size(); ++i) rv[i] = f.value(i) * s;
  return LocallyConstantFunction::from_table(f.matrix(), f.depth(), std::move(rv));
}

LocallyConstantFunction exp_base(const LocallyConstantFunction& f, double base) {
  if (!(base > 0)) throw Error(ErrorCode::BadInput, "exp_base needs a positive base");
  std::vector<double> rv(f.table_size());
  for (std::size_t i = 0; i < rv.size(); ++i) rv[i] = std::pow(base, f.value(i));
  return LocallyConstantFunction::from_table(f.matrix(), f.depth(), std::move(rv));
}

}  // namespace thermoshift
