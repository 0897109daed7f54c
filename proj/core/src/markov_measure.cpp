#include "thermoshift/markov_measure.hpp"

#include <cmath>
#include <limits>
#include <mutex>

namespace thermoshift {

struct MarkovMeasure::State {
  MatrixPtr matrix;
  int base_depth;
  LocallyConstantFunction potential;
  double eigenvalue;
  std::string source_tag;

  mutable std::mutex mu;
  // levels[d] is aligned with WordIndex(matrix, d); levels grow but existing
  // entries are never rewritten, so handed-out copies stay valid.
  mutable std::vector<std::vector<double>> levels;
  mutable std::vector<std::shared_ptr<const WordIndex>> indices;

  State(MatrixPtr m, int depth, LocallyConstantFunction phi, double r, std::string tag)
      : matrix(std::move(m)),
        base_depth(depth),
        potential(std::move(phi)),
        eigenvalue(r),
        source_tag(std::move(tag)) {}

  const WordIndex& index(int d) const {
    while (static_cast<int>(indices.size()) <= d)
      indices.push_back(std::make_shared<const WordIndex>(
          matrix, static_cast<int>(indices.size())));
    return *indices[d];
  }

  // Picks a positive value for the last entry of a family so that the
  // left-to-right float sum of the family reproduces the parent mass
  // exactly.  parent - head lands within an ulp of the right value; the
  // neighbouring doubles cover the rest of the rounding slack.
  static bool settle_last(double parent, std::vector<double>& vals, std::size_t begin,
                          std::size_t end) {
    double head = 0.0;
    for (std::size_t i = begin; i + 1 < end; ++i) head += vals[i];
    const double up = std::numeric_limits<double>::infinity();
    const double base = parent - head;
    const double candidates[5] = {base, std::nextafter(base, up), std::nextafter(base, -up),
                                  std::nextafter(std::nextafter(base, up), up),
                                  std::nextafter(std::nextafter(base, -up), -up)};
    for (double cand : candidates) {
      if (!(cand > 0)) continue;
      if (head + cand == parent) {
        vals[end - 1] = cand;
        return true;
      }
    }
    return false;
  }

  // Adjusts the tail of a family so the left-to-right float sum of the
  // family reproduces the parent mass exactly.  When no value of the last
  // entry works (the candidate sums tie halfway between the parent's
  // neighbours and round-to-even bounces off an odd mantissa), nudging the
  // penultimate entry by an ulp shifts the head sum off the tie.
  static void absorb_residual(double parent, std::vector<double>& vals,
                              std::size_t begin, std::size_t end) {
    if (settle_last(parent, vals, begin, end)) return;
    if (end - begin >= 2) {
      const double orig = vals[end - 2];
      const double inf = std::numeric_limits<double>::infinity();
      double lo = orig, hi = orig;
      for (int attempt = 0; attempt < 16; ++attempt) {
        hi = std::nextafter(hi, inf);
        vals[end - 2] = hi;
        if (settle_last(parent, vals, begin, end)) return;
        lo = std::nextafter(lo, -inf);
        if (lo > 0) {
          vals[end - 2] = lo;
          if (settle_last(parent, vals, begin, end)) return;
        }
      }
      vals[end - 2] = orig;
    }
    throw Error(ErrorCode::ContractViolation, "mass table consistency fix-up failed");
  }

  // Re-points every child family at level d+1 to sum exactly to its parent
  // at level d.  Families are contiguous because both levels are sorted.
  void settle_level(int parent_depth) const {
    const WordIndex& pidx = index(parent_depth);
    const WordIndex& cidx = index(parent_depth + 1);
    std::vector<double>& child = levels[parent_depth + 1];
    std::size_t c = 0;
    for (std::size_t p = 0; p < pidx.size(); ++p) {
      const Word& pw = pidx.word(p);
      std::size_t begin = c;
      while (c < cidx.size() &&
             std::equal(pw.begin(), pw.end(), cidx.word(c).begin()))
        ++c;
      if (begin == c)
        throw Error(ErrorCode::ContractViolation, "admissible cylinder with no extension");
      absorb_residual(levels[parent_depth][p], child, begin, c);
    }
  }

  void extend_locked(int depth) const {
    while (static_cast<int>(levels.size()) <= depth) {
      const int d = static_cast<int>(levels.size());  // level being added
      const WordIndex& idx = index(d);
      const WordIndex& prev = index(d - 1);
      std::vector<double> vals(idx.size());
      const double inv_r = 1.0 / eigenvalue;
      Word tail;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        const Word& w = idx.word(i);
        tail.assign(w.begin() + 1, w.end());
        vals[i] = std::exp(potential.evaluate(w)) * inv_r * levels[d - 1][prev.at(tail)];
      }
      levels.push_back(std::move(vals));
      settle_level(d - 1);
    }
  }

  void seed(std::vector<double> base) {
    // Levels below the base aggregate it; the root is then pinned to 1 and
    // every family is settled downward so all stored levels are consistent.
    levels.assign(1, std::vector<double>{1.0});
    std::vector<std::vector<double>> down(base_depth + 1);
    down[base_depth] = std::move(base);
    for (int d = base_depth - 1; d >= 1; --d) {
      const WordIndex& pidx = index(d);
      const WordIndex& cidx = index(d + 1);
      std::vector<double> vals(pidx.size(), 0.0);
      std::size_t c = 0;
      for (std::size_t p = 0; p < pidx.size(); ++p) {
        const Word& pw = pidx.word(p);
        double s = 0.0;
        while (c < cidx.size() &&
               std::equal(pw.begin(), pw.end(), cidx.word(c).begin())) {
          s += down[d + 1][c];
          ++c;
        }
        vals[p] = s;
      }
      down[d] = std::move(vals);
    }
    for (int d = 1; d <= base_depth; ++d) levels.push_back(std::move(down[d]));
    for (int d = 0; d < base_depth; ++d) settle_level(d);
  }
};

MarkovMeasure MarkovMeasure::from_base(MatrixPtr matrix, int base_depth,
                                       std::vector<double> base_masses, double eigenvalue,
                                       LocallyConstantFunction potential,
                                       std::string source_tag) {
  if (base_depth < 1) throw Error(ErrorCode::BadInput, "base depth must be at least 1");
  if (!(eigenvalue > 0)) throw Error(ErrorCode::BadInput, "eigenvalue must be positive");
  if (potential.depth() > base_depth)
    throw Error(ErrorCode::DepthTooSmall, "base depth below potential depth");
  if (!same_matrix(matrix, potential.matrix()))
    throw Error(ErrorCode::MatrixMismatch, "potential lives on a different shift");
  auto state = std::make_shared<State>(std::move(matrix), base_depth, std::move(potential),
                                       eigenvalue, std::move(source_tag));
  if (base_masses.size() != state->index(base_depth).size())
    throw Error(ErrorCode::BadInput, "base mass table size differs from word count");
  for (double v : base_masses)
    if (!(v > 0)) throw Error(ErrorCode::BadInput, "base masses must be strictly positive");
  state->seed(std::move(base_masses));
  return MarkovMeasure(std::move(state));
}

double MarkovMeasure::mass(const Word& w) const {
  if (!is_admissible(*state_->matrix, w)) return 0.0;
  std::lock_guard<std::mutex> lock(state_->mu);
  state_->extend_locked(static_cast<int>(w.size()));
  const WordIndex& idx = state_->index(static_cast<int>(w.size()));
  return state_->levels[w.size()][idx.at(w)];
}

std::vector<double> MarkovMeasure::level(int depth) const {
  if (depth < 0) throw Error(ErrorCode::BadInput, "negative depth");
  std::lock_guard<std::mutex> lock(state_->mu);
  state_->extend_locked(depth);
  return state_->levels[depth];
}

std::vector<std::pair<Word, double>> MarkovMeasure::mass_table(int max_depth) const {
  if (max_depth < 0) throw Error(ErrorCode::BadInput, "negative depth");
  std::lock_guard<std::mutex> lock(state_->mu);
  state_->extend_locked(max_depth);
  std::vector<std::pair<Word, double>> out;
  for (int d = 0; d <= max_depth; ++d) {
    const WordIndex& idx = state_->index(d);
    for (std::size_t i = 0; i < idx.size(); ++i)
      out.emplace_back(idx.word(i), state_->levels[d][i]);
  }
  return out;
}

double expectation(const MarkovMeasure& mu, const LocallyConstantFunction& f) {
  if (!same_matrix(mu.matrix(), f.matrix()))
    throw Error(ErrorCode::MatrixMismatch, "function lives on a different shift");
  std::vector<double> masses = mu.level(f.depth());
  double s = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i) s += f.value(i) * masses[i];
  return s;
}

const MatrixPtr& MarkovMeasure::matrix() const { return state_->matrix; }
int MarkovMeasure::base_depth() const { return state_->base_depth; }
double MarkovMeasure::eigenvalue() const { return state_->eigenvalue; }
const LocallyConstantFunction& MarkovMeasure::potential() const { return state_->potential; }
const std::string& MarkovMeasure::source_tag() const { return state_->source_tag; }

}  // namespace thermoshift
