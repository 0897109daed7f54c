#include "thermoshift/word.hpp"

#include <algorithm>
#include <charconv>

namespace thermoshift {

bool is_admissible(const TransitionMatrix& m, const Word& w) {
  for (int s : w)
    if (s < 1 || s > m.size()) return false;
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (!m.entry(w[i], w[i + 1])) return false;
  return true;
}

void for_each_admissible_word(const TransitionMatrix& m, int k,
                              const std::function<void(const Word&)>& fn) {
  if (k < 0) throw Error(ErrorCode::BadInput, "negative word length");
  Word buf;
  buf.reserve(k);
  if (k == 0) {
    fn(buf);
    return;
  }
  // Depth-first in symbol order, which is exactly lexicographic order.
  std::function<void()> rec = [&]() {
    if (static_cast<int>(buf.size()) == k) {
      fn(buf);
      return;
    }
    for (int s = 1; s <= m.size(); ++s) {
      if (!buf.empty() && !m.entry(buf.back(), s)) continue;
      buf.push_back(s);
      rec();
      buf.pop_back();
    }
  };
  rec();
}

std::vector<Word> admissible_words(const TransitionMatrix& m, int k) {
  std::vector<Word> out;
  for_each_admissible_word(m, k, [&](const Word& w) { out.push_back(w); });
  return out;
}

std::size_t count_admissible_words(const TransitionMatrix& m, int k) {
  if (k < 0) throw Error(ErrorCode::BadInput, "negative word length");
  if (k == 0) return 1;
  // Column counts under k-1 steps of the transfer of the underlying graph.
  std::vector<std::size_t> cnt(m.size(), 1);
  for (int step = 1; step < k; ++step) {
    std::vector<std::size_t> next(m.size(), 0);
    for (int i = 1; i <= m.size(); ++i)
      for (int j = 1; j <= m.size(); ++j)
        if (m.entry(i, j)) next[i - 1] += cnt[j - 1];
    cnt.swap(next);
  }
  std::size_t total = 0;
  for (std::size_t c : cnt) total += c;
  return total;
}

BigInt periodic_point_count(const TransitionMatrix& m, int n) {
  if (n < 1) throw Error(ErrorCode::BadInput, "period must be positive");
  const int N = m.size();
  std::vector<BigInt> power(static_cast<std::size_t>(N) * N), base(power.size());
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      base[static_cast<std::size_t>(i) * N + j] = m.entry(i + 1, j + 1) ? 1 : 0;
      power[static_cast<std::size_t>(i) * N + j] = (i == j) ? 1 : 0;
    }
  auto mul = [N](const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
    std::vector<BigInt> c(static_cast<std::size_t>(N) * N);
    for (int i = 0; i < N; ++i)
      for (int k = 0; k < N; ++k) {
        const BigInt& aik = a[static_cast<std::size_t>(i) * N + k];
        if (aik == 0) continue;
        for (int j = 0; j < N; ++j)
          c[static_cast<std::size_t>(i) * N + j] += aik * b[static_cast<std::size_t>(k) * N + j];
      }
    return c;
  };
  int e = n;
  std::vector<BigInt> sq = base;
  while (e > 0) {
    if (e & 1) power = mul(power, sq);
    sq = mul(sq, sq);
    e >>= 1;
  }
  BigInt trace = 0;
  for (int i = 0; i < N; ++i) trace += power[static_cast<std::size_t>(i) * N + i];
  return trace;
}

std::vector<Word> enumerate_cycles(const TransitionMatrix& m, int p,
                                   bool rotation_classes) {
  if (p < 1) throw Error(ErrorCode::BadInput, "period must be positive");
  std::vector<Word> out;
  for_each_admissible_word(m, p, [&](const Word& w) {
    if (!m.entry(w.back(), w.front())) return;
    if (rotation_classes) {
      Word rot = w;
      for (int r = 1; r < p; ++r) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        if (rot < w) return;  // keep only the lexicographically least rotation
      }
    }
    out.push_back(w);
  });
  return out;
}

std::string format_word(const Word& w, int alphabet_size) {
  std::string out;
  const bool compact = alphabet_size <= 9;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!compact && i > 0) out += ',';
    out += std::to_string(w[i]);
  }
  return out;
}

Word parse_word(std::string_view text, int alphabet_size) {
  Word w;
  if (text.empty()) return w;
  if (alphabet_size <= 9) {
    for (char c : text) {
      if (c < '1' || c > '9')
        throw Error(ErrorCode::BadInput, "bad symbol character in word");
      w.push_back(c - '0');
    }
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t comma = text.find(',', pos);
      std::string_view tok = text.substr(pos, comma == std::string_view::npos
                                                  ? std::string_view::npos
                                                  : comma - pos);
      int v = 0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || p != tok.data() + tok.size())
        throw Error(ErrorCode::BadInput, "bad symbol token in word");
      w.push_back(v);
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
  }
  for (int s : w)
    if (s < 1 || s > alphabet_size)
      throw Error(ErrorCode::BadInput, "symbol out of range in word");
  return w;
}

WordIndex::WordIndex(MatrixPtr m, int depth) : matrix_(std::move(m)), depth_(depth) {
  if (!matrix_) throw Error(ErrorCode::BadInput, "null matrix");
  if (depth < 0) throw Error(ErrorCode::BadInput, "negative depth");
  const std::size_t count = count_admissible_words(*matrix_, depth);
  if (count > (std::size_t{1} << 26))
    throw Error(ErrorCode::DepthTooLarge, "word table would exceed the size guard");
  words_.reserve(count);
  for_each_admissible_word(*matrix_, depth, [&](const Word& w) { words_.push_back(w); });
}

std::optional<std::size_t> WordIndex::find(const Word& w) const {
  auto it = std::lower_bound(words_.begin(), words_.end(), w);
  if (it == words_.end() || *it != w) return std::nullopt;
  return static_cast<std::size_t>(it - words_.begin());
}

std::size_t WordIndex::at(const Word& w) const {
  auto i = find(w);
  if (!i)
    throw Error(ErrorCode::NotAdmissible,
                "word " + format_word(w, matrix_->size()) + " is not in the table");
  return *i;
}

}  // namespace thermoshift
