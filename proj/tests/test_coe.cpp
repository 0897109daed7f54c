#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "test_support.hpp"
#include "thermoshift/coe.hpp"

using namespace test_support;
using ts::CoeWitness;
using ts::ErrorCode;
using ts::LocallyConstantFunction;
using ts::Word;

namespace {

LocallyConstantFunction int_table(const ts::MatrixPtr& m, std::vector<std::int64_t> v) {
  return LocallyConstantFunction::from_symbol_table(m, v);
}

CoeWitness identity_witness() {
  ts::MatrixPtr b = golden_mean();
  auto code = ts::SubstitutionCode::build(b, b, {Word{1}, Word{2}});
  return CoeWitness::build(std::move(code), int_table(b, {0, 0}), int_table(b, {1, 1}),
                           int_table(golden_mean(), {0, 0}), int_table(golden_mean(), {1, 1}));
}

// Independent two-state chain evaluation of the decoded-side sequence: each
// step extends the word by one symbol of the golden gauge chain and halves
// the weight whenever that symbol is 1.
std::vector<double> decoded_side_oracle(int n_max) {
  const double phi = kGoldenRatio;
  const double p11 = 1.0 / phi;
  const double p12 = 1.0 / (phi * phi);
  double d1 = (1.0 / phi) * 0.5;
  double d2 = 1.0 / (phi * phi);
  std::vector<double> out{d1 + d2};
  for (int n = 2; n <= n_max; ++n) {
    const double n1 = (d1 * p11 + d2) * 0.5;
    const double n2 = d1 * p12;
    d1 = n1;
    d2 = n2;
    out.push_back(d1 + d2);
  }
  return out;
}

}  // namespace

TEST_CASE("the bundled witness verifies on both equations") {
  const CoeWitness w = ts::golden_example();
  CHECK(ts::same_matrix(w.code.source(), full_shift2()));
  CHECK(ts::same_matrix(w.code.target(), golden_mean()));
  CHECK(w.code.image(1) == Word{1});
  CHECK(w.code.image(2) == Word{2, 1});

  const ts::VerifyReport report = ts::verify_equivalence(w, 12);
  CHECK(report.passed);
  CHECK(report.depth == 12);
  CHECK(report.words_checked == 4473);  // 4096 source + 377 target words
  CHECK(report.violations.empty());

  const ts::VerifyReport parallel = ts::verify_equivalence(w, 12, 4);
  CHECK(parallel.passed == report.passed);
  CHECK(parallel.words_checked == report.words_checked);
  CHECK(parallel.violations.size() == report.violations.size());
}

TEST_CASE("verification depth must leave an overlap") {
  const CoeWitness w = ts::golden_example();
  CHECK(thrown_code([&] { ts::verify_equivalence(w, 4); }) == ErrorCode::DepthTooSmall);
  CHECK(ts::verify_equivalence(w, 5).passed);
}

TEST_CASE("tampered return times are caught") {
  const CoeWitness good = ts::golden_example();
  const CoeWitness swapped =
      CoeWitness::build(good.code, good.k1, good.l1, good.l2, good.k2);
  const ts::VerifyReport r1 = ts::verify_equivalence(swapped, 10);
  CHECK_FALSE(r1.passed);
  CHECK_FALSE(r1.violations.empty());
  for (const auto& v : r1.violations) CHECK((v.equation == 1 || v.equation == 2));

  const CoeWitness shifted = CoeWitness::build(
      good.code, good.k1, int_table(full_shift2(), {2, 3}), good.k2, good.l2);
  const ts::VerifyReport r2 = ts::verify_equivalence(shifted, 10);
  CHECK_FALSE(r2.passed);
  bool equation1 = false;
  for (const auto& v : r2.violations) equation1 = equation1 || v.equation == 1;
  CHECK(equation1);

  // Violations are reported identically no matter how the work is split.
  const ts::VerifyReport r1p = ts::verify_equivalence(swapped, 10, 3);
  REQUIRE(r1p.violations.size() == r1.violations.size());
  for (std::size_t i = 0; i < r1.violations.size(); ++i) {
    CHECK(r1p.violations[i].equation == r1.violations[i].equation);
    CHECK(r1p.violations[i].word == r1.violations[i].word);
    CHECK(r1p.violations[i].detail == r1.violations[i].detail);
  }
}

TEST_CASE("witness construction is validated") {
  const CoeWitness good = ts::golden_example();
  CHECK(thrown_code([&] {
          CoeWitness::build(good.code, int_table(golden_mean(), {0, 0}), good.l1, good.k2,
                            good.l2);
        }) == ErrorCode::MatrixMismatch);
  CHECK(thrown_code([&] {
          CoeWitness::build(good.code, good.k1, int_table(full_shift2(), {1, -2}), good.k2,
                            good.l2);
        }) == ErrorCode::BadInput);
  CHECK(thrown_code([&] {
          CoeWitness::build(good.code, good.k1,
                            LocallyConstantFunction::constant(full_shift2(), 1.5), good.k2,
                            good.l2);
        }) == ErrorCode::BadInput);
}

TEST_CASE("cocycles are the return time differences") {
  const CoeWitness w = ts::golden_example();
  CHECK(ts::cocycle(w, 1).same_table(int_table(full_shift2(), {1, 2})));
  CHECK(ts::cocycle(w, 2).same_table(int_table(golden_mean(), {1, 0})));
  CHECK(thrown_code([&] { ts::cocycle(w, 0); }) == ErrorCode::BadInput);
  CHECK(thrown_code([&] { ts::cocycle(w, 3); }) == ErrorCode::BadInput);

  // The coding-side cocycle literally sums the symbols it reads.
  const auto c1 = ts::cocycle(w, 1);
  const auto s8 = c1.birkhoff(8);
  for (const Word& word : ts::admissible_words(*full_shift2(), 8))
    CHECK(s8.evaluate_int(word) == std::accumulate(word.begin(), word.end(), std::int64_t{0}));
}

TEST_CASE("decoding inverts the coding map") {
  const CoeWitness w = ts::golden_example();
  for (int len = 1; len <= 15; ++len) {
    for (const Word& word : ts::admissible_words(*full_shift2(), len)) {
      const Word coded = w.code.apply_code(word);
      CHECK(ts::is_admissible(*golden_mean(), coded));
      const auto decoded = w.code.decode(coded);
      CHECK(decoded.source_prefix == word);
      CHECK(decoded.remainder.empty());
    }
  }
  // A trailing unfinished image is returned as remainder.
  const auto partial = w.code.decode(Word{1, 2});
  CHECK(partial.source_prefix == Word{1});
  CHECK(partial.remainder == Word{2});
}

TEST_CASE("coboundary equations with integer offsets") {
  std::mt19937 rng(611);
  std::uniform_int_distribution<std::int64_t> offset(-3, 3);
  for (int trial = 0; trial < 10; ++trial) {
    ts::MatrixPtr m = trial % 2 == 0 ? full_shift2() : golden_mean();
    const auto b = random_int_function(rng, m, 1 + trial % 2, -5, 5);
    const std::int64_t kappa = offset(rng);
    const auto c =
        LocallyConstantFunction::constant(m, kappa) + b - b.compose_shift();
    CHECK(c.depth() <= 3);
    CHECK(cycle_sums_vanish(c, kappa));

    const auto solved = ts::coboundary_solve(c, ts::Rational{kappa, 1});
    REQUIRE(solved.has_value());
    CHECK(solved->kind() == ts::ValueKind::Integer);
    const int depth = std::max(2, c.depth());
    const auto residual = c.promote(depth) - *solved + solved->compose_shift();
    CHECK(residual.same_table(
        LocallyConstantFunction::constant(m, kappa).promote(depth)));

    // One bumped table entry breaks some orbit sum and must be refused.
    const auto words = ts::admissible_words(*m, 3);
    const Word& bump = words[static_cast<std::size_t>(trial) % words.size()];
    const auto c_bad = c.promote(3) + LocallyConstantFunction::indicator(m, bump);
    CHECK_FALSE(cycle_sums_vanish(c_bad, kappa));
    CHECK_FALSE(ts::coboundary_solve(c_bad, ts::Rational{kappa, 1}).has_value());
  }
}

TEST_CASE("coboundary equations with rational offsets") {
  ts::MatrixPtr a = full_shift2();
  std::mt19937 rng(612);
  const auto b = random_int_function(rng, a, 2, -4, 4);
  // c = 1 + b - b(shifted) against kappa = 2/2 exercises the scaled branch.
  const auto c = LocallyConstantFunction::constant(a, std::int64_t{1}) + b - b.compose_shift();
  const auto solved = ts::coboundary_solve(c, ts::Rational{2, 2});
  REQUIRE(solved.has_value());
  CHECK(solved->kind() == ts::ValueKind::Real);
  const int depth = std::max(2, c.depth());
  const auto residual = c.promote(depth) - *solved + solved->compose_shift();
  for (std::size_t i = 0; i < residual.table_size(); ++i)
    CHECK(std::abs(residual.value(i) - 1.0) <= 1e-12);

  // kappa = 1/2 cannot balance the self loop at symbol 1.
  CHECK_FALSE(ts::coboundary_solve(c, ts::Rational{1, 2}).has_value());

  CHECK(thrown_code([&] {
          ts::coboundary_solve(LocallyConstantFunction::constant(a, 0.5), ts::Rational{1, 1});
        }) == ErrorCode::BadInput);
  CHECK(thrown_code([&] { ts::coboundary_solve(c, ts::Rational{1, 0}); }) ==
        ErrorCode::BadInput);
}

TEST_CASE("strong equivalence of the bundled witness fails with a certificate") {
  const ts::ScoeResult r = ts::is_scoe(ts::golden_example());
  CHECK_FALSE(r.strongly_equivalent);
  CHECK_FALSE(r.coboundary.has_value());
  REQUIRE(r.obstruction.has_value());
  CHECK(r.obstruction->cycle == Word{2});
  CHECK(r.obstruction->cocycle_sum == 2);
  CHECK(r.obstruction->period == 1);
}

TEST_CASE("strong equivalence of the identity witness holds") {
  const CoeWitness w = identity_witness();
  CHECK(ts::verify_equivalence(w, 8).passed);
  const ts::ScoeResult r = ts::is_scoe(w);
  CHECK(r.strongly_equivalent);
  CHECK_FALSE(r.obstruction.has_value());
  REQUIRE(r.coboundary.has_value());
  const auto c1 = ts::cocycle(w, 1);
  const int depth = std::max(2, c1.depth());
  const auto residual = c1.promote(depth) - *r.coboundary + r.coboundary->compose_shift();
  CHECK(residual.same_table(LocallyConstantFunction::constant(
      w.code.source(), std::int64_t{1}).promote(depth)));
}

TEST_CASE("coding side sequence collapses to powers of one half") {
  const auto rows = ts::entropy_limit_sequence(ts::golden_example(), 1, 25);
  REQUIRE(rows.size() == 25);
  // Independent evaluation: sum phi^{-sum of symbols} over all words, via a
  // two-state recursion; the weighted sum is identically one.
  const double phi = kGoldenRatio;
  double s1 = 1.0 / phi, s2 = 1.0 / (phi * phi);
  for (const auto& row : rows) {
    const double expected = std::ldexp(1.0, -row.n);
    CHECK(std::abs(row.value - expected) <= 1e-12 * expected);
    CHECK(std::abs(row.entropy_estimate - kLog2) <= 1e-12);
    const double total = s1 + s2;
    CHECK(std::abs(total - 1.0) <= 1e-12);
    CHECK(std::abs(row.scaled - total) <= 1e-10);
    const double t1 = (s1 + s2) / phi;
    const double t2 = (s1 + s2) / (phi * phi);
    s1 = t1;
    s2 = t2;
  }
}

TEST_CASE("decoded side sequence matches the chain oracle") {
  const auto rows = ts::entropy_limit_sequence(ts::golden_example(), 2, 30);
  REQUIRE(rows.size() == 30);
  const auto oracle = decoded_side_oracle(30);
  for (int i = 0; i < 30; ++i) {
    CHECK(rows[i].n == i + 1);
    CHECK(std::abs(rows[i].value - oracle[i]) <= 1e-10 * oracle[i]);
  }
  CHECK(std::abs(rows[0].value - 0.6909830056250526) <= 1e-12);

  // Estimates close in on the golden mean entropy from below, monotonically
  // past the initial transient.
  for (int i = 4; i + 1 < 30; ++i) {
    const double gap = kLogGolden - rows[i].entropy_estimate;
    const double next = kLogGolden - rows[i + 1].entropy_estimate;
    CHECK(gap > 0.0);
    CHECK(next < gap);
  }
  CHECK(std::abs(rows[29].scaled - 2.0 * kGoldenRatio / 3.0) <= 1e-8);
}

TEST_CASE("limit constants summarize the scaled tail") {
  const ts::LimitConstants side1 = ts::limit_constants(ts::golden_example(), 1, 25);
  CHECK(side1.scaled.size() == 25);
  CHECK(std::abs(side1.limit - 1.0) <= 1e-10);
  CHECK(side1.tail_oscillation <= 1e-12);

  const ts::LimitConstants side2 = ts::limit_constants(ts::golden_example(), 2, 30);
  CHECK(std::abs(side2.limit - 2.0 * kGoldenRatio / 3.0) <= 1e-8);
  CHECK(side2.tail_oscillation <= 1e-6);

  CHECK(thrown_code([&] { ts::entropy_limit_sequence(ts::golden_example(), 3, 5); }) ==
        ErrorCode::BadInput);
  CHECK(thrown_code([&] { ts::entropy_limit_sequence(ts::golden_example(), 1, 0); }) ==
        ErrorCode::BadInput);
}

TEST_CASE("the follower counting identity holds exactly") {
  for (int n = 1; n <= 30; ++n) CHECK(ts::hn_check(n) == 0.0);
  CHECK(thrown_code([] { ts::hn_check(0); }) == ErrorCode::BadInput);
  CHECK(thrown_code([] { ts::hn_check(31); }) == ErrorCode::BadInput);
}

TEST_CASE("return time search recovers the bundled tables") {
  const CoeWitness w = ts::golden_example();
  const auto found = ts::search_return_times(w.code, 1, 8);
  REQUIRE(found.has_value());
  CHECK(found->first.same_table(w.k2));
  CHECK(found->second.same_table(w.l2));

  const CoeWitness id = identity_witness();
  const auto found_id = ts::search_return_times(id.code, 1, 8);
  REQUIRE(found_id.has_value());
  const CoeWitness rebuilt =
      CoeWitness::build(id.code, id.k1, id.l1, found_id->first, found_id->second);
  CHECK(ts::verify_equivalence(rebuilt, 8).passed);

  CHECK(thrown_code([&] { ts::search_return_times(w.code, 3000, 8); }) ==
        ErrorCode::BadInput);
}
