#include "thermoshift/transition_matrix.hpp"

#include <string>

namespace thermoshift {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotZeroOne: return "NotZeroOne";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::IsPermutation: return "IsPermutation";
    case ErrorCode::WordTooShort: return "WordTooShort";
    case ErrorCode::NotAdmissible: return "NotAdmissible";
    case ErrorCode::DepthTooSmall: return "DepthTooSmall";
    case ErrorCode::DepthTooLarge: return "DepthTooLarge";
    case ErrorCode::MatrixMismatch: return "MatrixMismatch";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::NotDecodable: return "NotDecodable";
    case ErrorCode::BadInput: return "BadInput";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::ContractViolation: return "ContractViolation";
  }
  return "UnknownError";
}

namespace {

// Strong connectivity of the directed graph i -> j iff rows[i][j] == 1.
// Forward reachability from vertex 0 plus reachability in the reversed
// graph covers every vertex exactly when the graph is strongly connected.
bool strongly_connected(const TransitionMatrix::Rows& rows) {
  const int n = static_cast<int>(rows.size());
  auto reach = [&](bool reversed) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w = 0; w < n; ++w) {
        bool edge = reversed ? rows[w][v] != 0 : rows[v][w] != 0;
        if (edge && !seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    for (char s : seen)
      if (!s) return false;
    return true;
  };
  return reach(false) && reach(true);
}

}  // namespace

TransitionMatrix::Check TransitionMatrix::check(const Rows& rows) {
  const std::size_t n = rows.size();
  for (const auto& row : rows) {
    if (row.size() != n) return {false, ErrorCode::NotSquare, "row length differs from row count"};
  }
  if (n < 2) return {false, ErrorCode::TooSmall, "alphabet must have at least two symbols"};
  for (const auto& row : rows) {
    for (int v : row) {
      if (v != 0 && v != 1) return {false, ErrorCode::NotZeroOne, "entry " + std::to_string(v)};
    }
  }
  if (!strongly_connected(rows))
    return {false, ErrorCode::NotIrreducible, "transition graph is not strongly connected"};
  bool permutation = true;
  for (std::size_t i = 0; i < n && permutation; ++i) {
    int rs = 0, cs = 0;
    for (std::size_t j = 0; j < n; ++j) {
      rs += rows[i][j];
      cs += rows[j][i];
    }
    if (rs != 1 || cs != 1) permutation = false;
  }
  if (permutation) return {false, ErrorCode::IsPermutation, "every row and column sums to one"};
  return {true, ErrorCode::BadInput, ""};
}

TransitionMatrix TransitionMatrix::validate(const Rows& rows) {
  Check c = check(rows);
  if (!c.ok) throw Error(c.code, c.detail);
  const int n = static_cast<int>(rows.size());
  std::vector<std::uint8_t> entries(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      entries[static_cast<std::size_t>(i) * n + j] = static_cast<std::uint8_t>(rows[i][j]);
  return TransitionMatrix(n, std::move(entries));
}

int TransitionMatrix::row_sum(int i) const {
  int s = 0;
  for (int j = 1; j <= n_; ++j) s += entry(i, j) ? 1 : 0;
  return s;
}

int TransitionMatrix::col_sum(int j) const {
  int s = 0;
  for (int i = 1; i <= n_; ++i) s += entry(i, j) ? 1 : 0;
  return s;
}

TransitionMatrix::Rows TransitionMatrix::rows() const {
  Rows out(n_, std::vector<int>(n_));
  for (int i = 1; i <= n_; ++i)
    for (int j = 1; j <= n_; ++j) out[i - 1][j - 1] = entry(i, j) ? 1 : 0;
  return out;
}

bool same_matrix(const MatrixPtr& a, const MatrixPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

}  // namespace thermoshift
