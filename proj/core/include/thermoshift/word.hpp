#ifndef THERMOSHIFT_WORD_HPP
#define THERMOSHIFT_WORD_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "thermoshift/transition_matrix.hpp"

namespace thermoshift {

using BigInt = boost::multiprecision::cpp_int;

// A finite word over {1, ..., N}.  The empty word is allowed and denotes the
// whole space when used as a cylinder.  Lexicographic order is the vector
// order with 1 < 2 < ... < N.
using Word = std::vector<int>;

bool is_admissible(const TransitionMatrix& m, const Word& w);

// All admissible words of length k in lexicographic order.  k = 0 yields the
// empty word only.
std::vector<Word> admissible_words(const TransitionMatrix& m, int k);

// Visits admissible words of length k in lexicographic order without
// materializing the whole list; the buffer passed to fn is reused.
void for_each_admissible_word(const TransitionMatrix& m, int k,
                              const std::function<void(const Word&)>& fn);

std::size_t count_admissible_words(const TransitionMatrix& m, int k);

// Number of periodic points of period n (not necessarily least period),
// i.e. the trace of the n-th matrix power, in exact integer arithmetic.
BigInt periodic_point_count(const TransitionMatrix& m, int n);

// Admissible words w of length p whose wrap-around step (w_p, w_1) is also
// admissible.  With rotation_classes set, one lexicographically least
// representative per cyclic rotation class is kept.
std::vector<Word> enumerate_cycles(const TransitionMatrix& m, int p,
                                   bool rotation_classes = false);

// Printable form: digits joined without separator when the alphabet fits in
// one digit ("121"), comma-separated otherwise ("10,1,3").
std::string format_word(const Word& w, int alphabet_size);
Word parse_word(std::string_view text, int alphabet_size);

// Lexicographically ordered table of the admissible words of one fixed
// length, with index lookup.  Table positions are the canonical indices for
// every value table of that depth.
class WordIndex {
 public:
  WordIndex(MatrixPtr m, int depth);

  int depth() const { return depth_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<Word>& words() const { return words_; }
  const Word& word(std::size_t i) const { return words_[i]; }

  std::optional<std::size_t> find(const Word& w) const;
  std::size_t at(const Word& w) const;  // throws NotAdmissible

  const MatrixPtr& matrix() const { return matrix_; }

 private:
  MatrixPtr matrix_;
  int depth_;
  std::vector<Word> words_;
};

}  // namespace thermoshift

#endif
