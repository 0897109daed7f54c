#include "thermoshift/coe.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>
#include <string>
#include <utility>
#include <vector>

#include "thermoshift/errors.hpp"
#include "thermoshift/perron.hpp"

namespace thermoshift {

namespace {

void require_return_time(const LocallyConstantFunction& f, const MatrixPtr& m,
                         const char* name) {
  if (!same_matrix(f.matrix(), m)) {
    throw Error(ErrorCode::MatrixMismatch, std::string(name) + " lives on the wrong shift");
  }
  if (f.kind() != ValueKind::Integer) {
    throw Error(ErrorCode::BadInput, std::string(name) + " must be integer valued");
  }
  for (std::size_t i = 0; i < f.table_size(); ++i) {
    if (f.ivalue(i) < 0) {
      throw Error(ErrorCode::BadInput, std::string(name) + " must be nonnegative");
    }
  }
}

Word drop_prefix(const Word& w, std::int64_t k) {
  if (k >= static_cast<std::int64_t>(w.size())) return {};
  return Word(w.begin() + static_cast<std::ptrdiff_t>(k), w.end());
}

// Admissible words of the given length with a fixed first symbol, in
// lexicographic order.
void walk_words(const TransitionMatrix& m, Word& buf, int remaining,
                const std::function<void(const Word&)>& fn) {
  if (remaining == 0) {
    fn(buf);
    return;
  }
  const int n = m.size();
  const int prev = buf.back();
  for (int j = 1; j <= n; ++j) {
    if (!m.entry(prev, j)) continue;
    buf.push_back(j);
    walk_words(m, buf, remaining - 1, fn);
    buf.pop_back();
  }
}

std::int64_t checked_add64(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw Error(ErrorCode::BadInput, "cocycle sum overflows");
  }
  return out;
}

}  // namespace

CoeWitness CoeWitness::build(SubstitutionCode code, LocallyConstantFunction k1,
                             LocallyConstantFunction l1, LocallyConstantFunction k2,
                             LocallyConstantFunction l2) {
  require_return_time(k1, code.source(), "k1");
  require_return_time(l1, code.source(), "l1");
  require_return_time(k2, code.target(), "k2");
  require_return_time(l2, code.target(), "l2");
  return CoeWitness{std::move(code), std::move(k1), std::move(l1), std::move(k2),
                    std::move(l2)};
}

LocallyConstantFunction cocycle(const CoeWitness& w, int side) {
  if (side == 1) return w.l1 - w.k1;
  if (side == 2) return w.l2 - w.k2;
  throw Error(ErrorCode::BadInput, "side must be 1 or 2");
}

namespace {

int witness_min_depth(const CoeWitness& w) {
  int d = std::max(std::max(w.k1.depth(), w.l1.depth()),
                   std::max(w.k2.depth(), w.l2.depth()));
  return d + w.code.max_image_length() + 2;
}

// sigma^{k1} h(sigma x) versus sigma^{l1} h(x) on the image of one source
// word.  Both truncations are prefixes of the same infinite orbit, so any
// disagreement on the common window disproves the identity.
std::optional<VerifyViolation> check_forward(const CoeWitness& w, const Word& u) {
  const Word img = w.code.apply_code(u);
  const auto first_len = static_cast<std::int64_t>(w.code.image(u.front()).size());
  const Word img_shift = drop_prefix(img, first_len);
  const Word lhs = drop_prefix(img_shift, w.k1.evaluate_int(u));
  const Word rhs = drop_prefix(img, w.l1.evaluate_int(u));
  const std::size_t overlap = std::min(lhs.size(), rhs.size());
  if (overlap == 0) {
    throw Error(ErrorCode::DepthTooSmall,
                "verification depth leaves no overlap for the forward identity");
  }
  for (std::size_t i = 0; i < overlap; ++i) {
    if (lhs[i] != rhs[i]) {
      return VerifyViolation{1, u,
                             "images disagree at offset " + std::to_string(i)};
    }
  }
  return std::nullopt;
}

// sigma^{k2} decode(sigma y) versus sigma^{l2} decode(y) on one target word.
std::optional<VerifyViolation> check_decoded(const CoeWitness& w, const Word& v) {
  Word dec_v, dec_sv;
  try {
    dec_v = w.code.decode(v).source_prefix;
    dec_sv = w.code.decode(Word(v.begin() + 1, v.end())).source_prefix;
  } catch (const Error& e) {
    return VerifyViolation{2, v, std::string("decode failed: ") + e.what()};
  }
  const Word lhs = drop_prefix(dec_sv, w.k2.evaluate_int(v));
  const Word rhs = drop_prefix(dec_v, w.l2.evaluate_int(v));
  const std::size_t overlap = std::min(lhs.size(), rhs.size());
  if (overlap == 0) {
    throw Error(ErrorCode::DepthTooSmall,
                "verification depth leaves no overlap for the decoded identity");
  }
  for (std::size_t i = 0; i < overlap; ++i) {
    if (lhs[i] != rhs[i]) {
      return VerifyViolation{2, v,
                             "decoded orbits disagree at offset " + std::to_string(i)};
    }
  }
  return std::nullopt;
}

struct ChunkReport {
  std::size_t words_checked = 0;
  std::vector<VerifyViolation> violations;
};

template <typename Check>
ChunkReport run_chunk(const TransitionMatrix& m, int first, int depth, const Check& check) {
  ChunkReport out;
  Word buf{first};
  walk_words(m, buf, depth - 1, [&](const Word& word) {
    ++out.words_checked;
    if (auto v = check(word)) out.violations.push_back(std::move(*v));
  });
  return out;
}

template <typename Check>
void run_equation(const TransitionMatrix& m, int depth, int threads, const Check& check,
                  VerifyReport& report) {
  const int n = m.size();
  if (threads <= 1) {
    for (int a = 1; a <= n; ++a) {
      ChunkReport chunk = run_chunk(m, a, depth, check);
      report.words_checked += chunk.words_checked;
      for (auto& v : chunk.violations) report.violations.push_back(std::move(v));
    }
    return;
  }
  std::vector<std::future<ChunkReport>> tasks;
  tasks.reserve(static_cast<std::size_t>(n));
  for (int a = 1; a <= n; ++a) {
    tasks.push_back(std::async(std::launch::async,
                               [&m, a, depth, &check] { return run_chunk(m, a, depth, check); }));
  }
  for (auto& t : tasks) {
    ChunkReport chunk = t.get();
    report.words_checked += chunk.words_checked;
    for (auto& v : chunk.violations) report.violations.push_back(std::move(v));
  }
}

}  // namespace

VerifyReport verify_equivalence(const CoeWitness& w, int depth, int threads) {
  const int min_depth = witness_min_depth(w);
  if (depth < min_depth) {
    throw Error(ErrorCode::DepthTooSmall,
                "verification depth must be at least " + std::to_string(min_depth));
  }
  VerifyReport report{true, depth, 0, {}};
  run_equation(*w.code.source(), depth, threads,
               [&w](const Word& u) { return check_forward(w, u); }, report);
  run_equation(*w.code.target(), depth, threads,
               [&w](const Word& v) { return check_decoded(w, v); }, report);
  report.passed = report.violations.empty();
  return report;
}

std::optional<LocallyConstantFunction> coboundary_solve(const LocallyConstantFunction& c,
                                                        Rational kappa) {
  if (c.kind() != ValueKind::Integer) {
    throw Error(ErrorCode::BadInput, "coboundary_solve needs an integer cocycle");
  }
  if (kappa.den <= 0) {
    throw Error(ErrorCode::BadInput, "kappa denominator must be positive");
  }
  const int m = std::max(2, c.depth());
  const LocallyConstantFunction cm = c.promote(m);
  const MatrixPtr& matrix = c.matrix();
  const WordIndex vertices(matrix, m - 1);
  const std::size_t vcount = vertices.size();
  const auto& edge_words = cm.index().words();

  // Edge w: prefix -> suffix with constraint b(prefix) - b(suffix) = q c(w) - p.
  struct Arc {
    std::size_t from, to;
    std::int64_t delta;
  };
  std::vector<Arc> arcs;
  arcs.reserve(edge_words.size());
  std::vector<std::vector<std::size_t>> out(vcount);
  for (std::size_t e = 0; e < edge_words.size(); ++e) {
    const Word& word = edge_words[e];
    const Word pre(word.begin(), word.end() - 1);
    const Word suf(word.begin() + 1, word.end());
    const auto v = static_cast<__int128>(kappa.den) * cm.ivalue(e) - kappa.num;
    if (v > INT64_MAX || v < INT64_MIN) {
      throw Error(ErrorCode::BadInput, "cocycle values overflow the solver");
    }
    out[vertices.at(pre)].push_back(arcs.size());
    arcs.push_back(Arc{vertices.at(pre), vertices.at(suf), static_cast<std::int64_t>(v)});
  }

  // The higher-block graph of an irreducible shift is strongly connected, so
  // a forward search from any vertex assigns every potential value.
  std::vector<std::int64_t> b(vcount, 0);
  std::vector<char> seen(vcount, 0);
  std::deque<std::size_t> queue{0};
  seen[0] = 1;
  while (!queue.empty()) {
    const std::size_t p = queue.front();
    queue.pop_front();
    for (std::size_t ai : out[p]) {
      const Arc& a = arcs[ai];
      if (seen[a.to]) continue;
      seen[a.to] = 1;
      b[a.to] = checked_add64(b[a.from], -a.delta);
      queue.push_back(a.to);
    }
  }
  for (std::size_t v = 0; v < vcount; ++v) {
    if (!seen[v]) {
      throw Error(ErrorCode::ContractViolation, "higher-block graph is not connected");
    }
  }
  for (const Arc& a : arcs) {
    if (b[a.from] - b[a.to] != a.delta) return std::nullopt;
  }

  if (kappa.den == 1) {
    LocallyConstantFunction bf =
        LocallyConstantFunction::from_table(matrix, m - 1, std::vector<std::int64_t>(b));
    const LocallyConstantFunction residual = cm - bf.promote(m) + bf.compose_shift();
    for (std::size_t i = 0; i < residual.table_size(); ++i) {
      if (residual.ivalue(i) != kappa.num) {
        throw Error(ErrorCode::ContractViolation, "coboundary verification failed");
      }
    }
    return bf;
  }
  std::vector<double> scaled(vcount);
  for (std::size_t v = 0; v < vcount; ++v) {
    scaled[v] = static_cast<double>(b[v]) / static_cast<double>(kappa.den);
  }
  LocallyConstantFunction bf =
      LocallyConstantFunction::from_table(matrix, m - 1, std::move(scaled));
  const LocallyConstantFunction residual = cm - bf.promote(m) + bf.compose_shift();
  const double target = static_cast<double>(kappa.num) / static_cast<double>(kappa.den);
  for (std::size_t i = 0; i < residual.table_size(); ++i) {
    if (std::abs(residual.value(i) - target) > 1e-9) {
      throw Error(ErrorCode::ContractViolation, "coboundary verification failed");
    }
  }
  return bf;
}

ScoeResult is_scoe(const CoeWitness& w) {
  const LocallyConstantFunction c1 = cocycle(w, 1);
  if (auto b = coboundary_solve(c1, Rational{1, 1})) {
    return ScoeResult{true, std::move(b), std::nullopt};
  }
  // Any failure is witnessed by a periodic orbit whose cocycle sum differs
  // from its period; a violating closed walk decomposes into simple cycles,
  // so periods up to the higher-block vertex count suffice.
  const MatrixPtr& matrix = c1.matrix();
  const int d = c1.depth();
  const int m = std::max(2, d);
  const std::size_t vcount = count_admissible_words(*matrix, m - 1);
  for (std::size_t p = 1; p <= vcount; ++p) {
    for (const Word& cyc : enumerate_cycles(*matrix, static_cast<int>(p), true)) {
      Word ext = cyc;
      while (ext.size() < cyc.size() + static_cast<std::size_t>(d) - 1) {
        ext.insert(ext.end(), cyc.begin(), cyc.end());
      }
      std::int64_t sum = 0;
      for (std::size_t i = 0; i < cyc.size(); ++i) {
        const Word window(ext.begin() + static_cast<std::ptrdiff_t>(i),
                          ext.begin() + static_cast<std::ptrdiff_t>(i + d));
        sum = checked_add64(sum, c1.evaluate_int(window));
      }
      if (sum != static_cast<std::int64_t>(p)) {
        return ScoeResult{false, std::nullopt,
                          CycleCertificate{cyc, sum, static_cast<int>(p)}};
      }
    }
  }
  throw Error(ErrorCode::ContractViolation, "no certificate found for unsolvable cocycle");
}

std::vector<EntropyLimitRow> entropy_limit_sequence(const CoeWitness& w, int side, int n_max,
                                                    double tol, int max_iter) {
  if (n_max < 1) {
    throw Error(ErrorCode::BadInput, "n_max must be at least 1");
  }
  const MatrixPtr& space = side == 1 ? w.code.source() : w.code.target();
  const MatrixPtr& other = side == 1 ? w.code.target() : w.code.source();
  const LocallyConstantFunction c = cocycle(w, side);
  const double r_space = perron(*space, tol, max_iter).eigenvalue;
  const double r_other = perron(*other, tol, max_iter).eigenvalue;
  const MarkovMeasure mu = gauge_kms(space, tol, max_iter);
  const LocallyConstantFunction psi = scale(c, -std::log(r_other));

  std::vector<EntropyLimitRow> rows;
  rows.reserve(static_cast<std::size_t>(n_max));
  LocallyConstantFunction f = LocallyConstantFunction::constant(space, 1.0);
  const double log_r = std::log(r_space);
  double scale_factor = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    f = transfer_apply(psi, f);
    scale_factor /= r_space;
    const double a = expectation(mu, f);
    rows.push_back(EntropyLimitRow{n, scale_factor * a, log_r - std::log(a) / n, a});
  }
  return rows;
}

LimitConstants limit_constants(const CoeWitness& w, int side, int n_max, double tol,
                               int max_iter) {
  const auto rows = entropy_limit_sequence(w, side, n_max, tol, max_iter);
  LimitConstants out;
  out.scaled.reserve(rows.size());
  for (const auto& row : rows) out.scaled.push_back(row.scaled);
  out.limit = out.scaled.back();
  const std::size_t tail = std::max<std::size_t>(1, out.scaled.size() / 4);
  const auto begin = out.scaled.end() - static_cast<std::ptrdiff_t>(tail);
  const auto [lo, hi] = std::minmax_element(begin, out.scaled.end());
  out.tail_oscillation = *hi - *lo;
  return out;
}

CoeWitness golden_example() {
  const MatrixPtr full = make_matrix({{1, 1}, {1, 1}});
  const MatrixPtr golden = make_matrix({{1, 1}, {1, 0}});
  SubstitutionCode code = SubstitutionCode::build(full, golden, {Word{1}, Word{2, 1}});
  auto k1 = LocallyConstantFunction::from_symbol_table(full, std::vector<std::int64_t>{0, 0});
  auto l1 = LocallyConstantFunction::from_symbol_table(full, std::vector<std::int64_t>{1, 2});
  auto k2 = LocallyConstantFunction::from_symbol_table(golden, std::vector<std::int64_t>{0, 1});
  auto l2 = LocallyConstantFunction::from_symbol_table(golden, std::vector<std::int64_t>{1, 1});
  return CoeWitness::build(std::move(code), std::move(k1), std::move(l1), std::move(k2),
                           std::move(l2));
}

double hn_check(int n) {
  if (n < 1 || n > 30) {
    throw Error(ErrorCode::BadInput, "hn_check supports 1 <= n <= 30");
  }
  // Weighted path counts on the golden mean graph, weight 2 on symbol 2.
  BigInt s1 = 1, s2 = 2;
  for (int step = 2; step <= n; ++step) {
    const BigInt n1 = s1 + s2;
    const BigInt n2 = 2 * s1;
    s1 = n1;
    s2 = n2;
  }
  const BigInt h1 = s1 + s2;
  const BigInt h2 = s1;
  const BigInt pow_n1 = BigInt(1) << (n + 1);
  const BigInt sign = (n % 2 == 0) ? BigInt(1) : BigInt(-1);
  // Closed forms (2^{n+2} - s)/3 and (2^{n+1} + s)/3, compared exactly after
  // clearing the denominator.
  const BigInt dev1 = abs(3 * h1 - (2 * pow_n1 - sign));
  const BigInt dev2 = abs(3 * h2 - (pow_n1 + sign));
  const BigInt dev = dev1 > dev2 ? dev1 : dev2;
  return dev.convert_to<double>() / 3.0;
}

std::optional<std::pair<LocallyConstantFunction, LocallyConstantFunction>> search_return_times(
    const SubstitutionCode& code, int max_value, int verify_depth) {
  if (max_value < 0) {
    throw Error(ErrorCode::BadInput, "max_value must be nonnegative");
  }
  const int min_depth = 1 + code.max_image_length() + 2;
  if (verify_depth < min_depth) {
    throw Error(ErrorCode::DepthTooSmall,
                "verification depth must be at least " + std::to_string(min_depth));
  }
  const MatrixPtr& source = code.source();
  const MatrixPtr& target = code.target();
  const int nt = target->size();
  const double space =
      std::pow(static_cast<double>(max_value) + 1.0, 2.0 * static_cast<double>(nt));
  if (space > 2e7) {
    throw Error(ErrorCode::BadInput, "return-time search space too large");
  }

  // Forward return times are forced by the code itself.
  std::vector<std::int64_t> zeros(static_cast<std::size_t>(source->size()), 0);
  std::vector<std::int64_t> lens;
  lens.reserve(static_cast<std::size_t>(source->size()));
  for (int a = 1; a <= source->size(); ++a) {
    lens.push_back(static_cast<std::int64_t>(code.image(a).size()));
  }
  const auto k1 = LocallyConstantFunction::from_symbol_table(source, zeros);
  const auto l1 = LocallyConstantFunction::from_symbol_table(source, lens);

  std::vector<std::int64_t> digits(2 * static_cast<std::size_t>(nt), 0);
  while (true) {
    const std::vector<std::int64_t> k2_vals(digits.begin(), digits.begin() + nt);
    const std::vector<std::int64_t> l2_vals(digits.begin() + nt, digits.end());
    auto k2 = LocallyConstantFunction::from_symbol_table(target, k2_vals);
    auto l2 = LocallyConstantFunction::from_symbol_table(target, l2_vals);
    CoeWitness cand = CoeWitness::build(code, k1, l1, std::move(k2), std::move(l2));
    try {
      const VerifyReport report = verify_equivalence(cand, verify_depth);
      if (report.passed) {
        return std::make_pair(cand.k2, cand.l2);
      }
    } catch (const Error& e) {
      // Candidates whose values exhaust the comparable window are skipped,
      // matching the best-effort contract of the search.
      if (e.code() != ErrorCode::DepthTooSmall) throw;
    }
    int i = static_cast<int>(digits.size()) - 1;
    while (i >= 0 && digits[static_cast<std::size_t>(i)] == max_value) {
      digits[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
    ++digits[static_cast<std::size_t>(i)];
  }
  return std::nullopt;
}

}  // namespace thermoshift
