#ifndef THERMOSHIFT_TRANSITION_MATRIX_HPP
#define THERMOSHIFT_TRANSITION_MATRIX_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "thermoshift/errors.hpp"

namespace thermoshift {

// 0-1 transition matrix of a one-sided topological Markov shift over the
// alphabet {1, ..., N}.  Instances are immutable and always satisfy:
//   * square, N >= 2, entries in {0, 1}
//   * irreducible (the transition graph is strongly connected)
//   * not a permutation matrix
// Construction goes through validate(), which reports the first violated
// requirement.  Symbols are 1-based everywhere in the public interface.
class TransitionMatrix {
 public:
  using Rows = std::vector<std::vector<int>>;

  static TransitionMatrix validate(const Rows& rows);

  // Non-throwing probe used by validate(); returns the code of the first
  // defect found, or nullopt-equivalent BadInput-free signal via ok flag.
  struct Check {
    bool ok;
    ErrorCode code;        // meaningful only if !ok
    std::string detail;
  };
  static Check check(const Rows& rows);

  int size() const { return n_; }

  bool entry(int i, int j) const {  // 1-based
    return entries_[static_cast<std::size_t>(i - 1) * n_ + (j - 1)] != 0;
  }

  int row_sum(int i) const;
  int col_sum(int j) const;

  const std::vector<std::uint8_t>& raw() const { return entries_; }
  Rows rows() const;

  bool operator==(const TransitionMatrix& other) const {
    return n_ == other.n_ && entries_ == other.entries_;
  }
  bool operator!=(const TransitionMatrix& other) const { return !(*this == other); }

 private:
  TransitionMatrix(int n, std::vector<std::uint8_t> entries)
      : n_(n), entries_(std::move(entries)) {}

  int n_;
  std::vector<std::uint8_t> entries_;  // row-major
};

using MatrixPtr = std::shared_ptr<const TransitionMatrix>;

inline MatrixPtr make_matrix(const TransitionMatrix::Rows& rows) {
  return std::make_shared<const TransitionMatrix>(TransitionMatrix::validate(rows));
}

// Content equality for shared handles; distinct allocations of the same
// matrix are interchangeable.
bool same_matrix(const MatrixPtr& a, const MatrixPtr& b);

}  // namespace thermoshift

#endif
