#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "test_support.hpp"
#include "thermoshift/kms.hpp"

using namespace test_support;
using ts::ErrorCode;
using ts::LocallyConstantFunction;
using ts::ValueKind;
using ts::Word;

TEST_CASE("construction is validated") {
  ts::MatrixPtr b = golden_mean();
  CHECK(thrown_code([&] {
          LocallyConstantFunction::from_table(b, 2, std::vector<std::int64_t>{1, 2});
        }) == ErrorCode::BadInput);
  CHECK(thrown_code([&] {
          LocallyConstantFunction::from_table(b, 0, std::vector<std::int64_t>{1});
        }) == ErrorCode::BadInput);
  CHECK(thrown_code([&] {
          LocallyConstantFunction::from_symbol_table(b, std::vector<double>{1.0});
        }) == ErrorCode::BadInput);
  CHECK(thrown_code([&] {
          LocallyConstantFunction::indicator(b, Word{2, 2});
        }) == ErrorCode::NotAdmissible);

  const auto c = LocallyConstantFunction::constant(b, std::int64_t{3});
  CHECK(c.depth() == 1);
  CHECK(c.kind() == ValueKind::Integer);
  CHECK(c.table_size() == 2);

  const auto ind = LocallyConstantFunction::indicator(b, Word{});
  CHECK(ind.depth() == 1);
  CHECK(ind.evaluate_int(Word{2}) == 1);
}

TEST_CASE("evaluation uses the leading window and checks admissibility") {
  ts::MatrixPtr b = golden_mean();
  const auto f = LocallyConstantFunction::from_table(b, 2, std::vector<std::int64_t>{5, 7, 11});
  CHECK(f.evaluate_int(Word{1, 1}) == 5);
  CHECK(f.evaluate_int(Word{1, 2}) == 7);
  CHECK(f.evaluate_int(Word{2, 1}) == 11);
  CHECK(f.evaluate_int(Word{1, 2, 1, 1}) == 7);  // longer words use the prefix
  CHECK(f.evaluate(Word{2, 1, 2}) == 11.0);
  CHECK(thrown_code([&] { f.evaluate(Word{1}); }) == ErrorCode::WordTooShort);
  CHECK(thrown_code([&] { f.evaluate(Word{2, 2}); }) == ErrorCode::NotAdmissible);
  CHECK(thrown_code([&] { f.evaluate(Word{1, 1, 2, 2}); }) == ErrorCode::NotAdmissible);

  const auto r = LocallyConstantFunction::constant(b, 0.5);
  CHECK(thrown_code([&] { r.evaluate_int(Word{1}); }) == ErrorCode::KindMismatch);
  CHECK(thrown_code([&] { r.ivalue(0); }) == ErrorCode::KindMismatch);
}

TEST_CASE("promotion preserves values and kind") {
  std::mt19937 rng(31);
  ts::MatrixPtr b = golden_mean();
  const auto f = random_int_function(rng, b, 2, -9, 9);
  const auto g = f.promote(4);
  CHECK(g.depth() == 4);
  CHECK(g.kind() == ValueKind::Integer);
  for (const Word& w : ts::admissible_words(*b, 4))
    CHECK(g.evaluate_int(w) == f.evaluate_int(w));
  CHECK(f.promote(2).same_table(f));
  CHECK(thrown_code([&] { f.promote(1); }) == ErrorCode::DepthTooSmall);
}

TEST_CASE("shift composition delays the window by one symbol") {
  std::mt19937 rng(32);
  ts::MatrixPtr b = golden_mean();
  const auto f = random_int_function(rng, b, 2, -9, 9);
  const auto g = f.compose_shift();
  CHECK(g.depth() == 3);
  for (const Word& w : ts::admissible_words(*b, 3))
    CHECK(g.evaluate_int(w) == f.evaluate_int(Word(w.begin() + 1, w.end())));
}

TEST_CASE("birkhoff sums add along the orbit") {
  ts::MatrixPtr a = full_shift2();
  const auto sym = LocallyConstantFunction::from_symbol_table(
      a, std::vector<std::int64_t>{1, 2});
  const auto s3 = sym.birkhoff(3);
  CHECK(s3.depth() == 3);
  for (const Word& w : ts::admissible_words(*a, 3))
    CHECK(s3.evaluate_int(w) == w[0] + w[1] + w[2]);
  CHECK(sym.birkhoff(1).same_table(sym));
  CHECK(thrown_code([&] { sym.birkhoff(0); }) == ErrorCode::BadInput);

  // S_{n+m} f = S_n f + (S_m f) after n shifts, exactly.
  std::mt19937 rng(33);
  ts::MatrixPtr b = golden_mean();
  const auto f = random_int_function(rng, b, 2, -20, 20);
  const int n = 2, m = 3;
  auto tail = f.birkhoff(m);
  for (int i = 0; i < n; ++i) tail = tail.compose_shift();
  CHECK((f.birkhoff(n) + tail).same_table(f.birkhoff(n + m)));
}

TEST_CASE("integer arithmetic is exact and refuses to overflow") {
  ts::MatrixPtr b = golden_mean();
  const auto f = LocallyConstantFunction::from_table(b, 2, std::vector<std::int64_t>{5, 7, 11});
  const auto g = LocallyConstantFunction::from_table(b, 2, std::vector<std::int64_t>{1, -2, 3});
  CHECK((f + g).kind() == ValueKind::Integer);
  CHECK((f + g).evaluate_int(Word{1, 2}) == 5);
  CHECK((f - g).evaluate_int(Word{2, 1}) == 8);
  CHECK((f * g).evaluate_int(Word{1, 1}) == 5);

  const auto big = LocallyConstantFunction::constant(
      b, std::numeric_limits<std::int64_t>::max());
  const auto one = LocallyConstantFunction::constant(b, std::int64_t{1});
  CHECK(thrown_code([&] { big + one; }) == ErrorCode::ContractViolation);
  CHECK(thrown_code([&] { big.birkhoff(2); }) == ErrorCode::ContractViolation);
}

TEST_CASE("mixed and scaled operations produce real tables") {
  ts::MatrixPtr b = golden_mean();
  const auto f = LocallyConstantFunction::constant(b, std::int64_t{2});
  const auto r = LocallyConstantFunction::constant(b, 0.25);
  CHECK((f + r).kind() == ValueKind::Real);
  CHECK((f + r).evaluate(Word{1}) == 2.25);
  CHECK(ts::scale(f, 0.5).kind() == ValueKind::Real);
  CHECK(ts::scale(f, 0.5).evaluate(Word{2}) == 1.0);

  const auto e = ts::exp_base(f, 3.0);
  CHECK(e.kind() == ValueKind::Real);
  CHECK(e.evaluate(Word{1}) == 9.0);
  CHECK(thrown_code([&] { ts::exp_base(f, 0.0); }) == ErrorCode::BadInput);
  CHECK(thrown_code([&] { ts::exp_base(f, -2.0); }) == ErrorCode::BadInput);

  const auto mixed = LocallyConstantFunction::from_table(
      b, 1, std::vector<double>{-1.5, 4.0});
  CHECK(mixed.min_value() == -1.5);
  CHECK(mixed.max_value() == 4.0);
  CHECK(mixed.sup_norm() == 4.0);
  CHECK(thrown_code([&] {
          mixed + LocallyConstantFunction::constant(full_shift2(), 1.0);
        }) == ErrorCode::MatrixMismatch);
}

TEST_CASE("table identity comparison is strict") {
  ts::MatrixPtr b = golden_mean();
  const auto f = LocallyConstantFunction::from_table(b, 1, std::vector<std::int64_t>{1, 2});
  CHECK(f.same_table(LocallyConstantFunction::from_table(
      golden_mean(), 1, std::vector<std::int64_t>{1, 2})));
  CHECK_FALSE(f.same_table(LocallyConstantFunction::from_table(
      b, 1, std::vector<std::int64_t>{1, 3})));
  CHECK_FALSE(f.same_table(LocallyConstantFunction::from_table(
      b, 1, std::vector<double>{1.0, 2.0})));  // kind matters
  CHECK_FALSE(f.same_table(f.promote(2)));     // depth matters
  CHECK_FALSE(f.same_table(LocallyConstantFunction::from_table(
      full_shift2(), 1, std::vector<std::int64_t>{1, 2})));
}

TEST_CASE("gauge measure has the closed product form") {
  const ts::MarkovMeasure mu_a = ts::gauge_kms(full_shift2());
  CHECK(mu_a.eigenvalue() == 2.0);
  CHECK(mu_a.mass(Word{}) == 1.0);
  CHECK(mu_a.mass(Word{1}) == 0.5);
  CHECK(mu_a.mass(Word{2}) == 0.5);
  CHECK(mu_a.mass(Word{1, 2}) == 0.25);
  CHECK(mu_a.mass(Word{2, 1, 2}) == 0.125);

  const ts::MarkovMeasure mu_b = ts::gauge_kms(golden_mean());
  const double phi = kGoldenRatio;
  CHECK(std::abs(mu_b.eigenvalue() - phi) <= 1e-12);
  CHECK(std::abs(mu_b.mass(Word{1}) - 1.0 / phi) <= 1e-12);
  CHECK(std::abs(mu_b.mass(Word{2}) - 1.0 / (phi * phi)) <= 1e-12);
  CHECK(std::abs(mu_b.mass(Word{1, 2}) - 1.0 / (phi * phi * phi)) <= 1e-12);
  CHECK(mu_b.mass(Word{2, 2}) == 0.0);
  CHECK(mu_b.base_depth() == 1);

  CHECK(kolmogorov_defect(mu_a, 8) == 0.0);
  CHECK(kolmogorov_defect(mu_b, 8) == 0.0);
}

TEST_CASE("expectations integrate cylinder indicators to their masses") {
  const ts::MarkovMeasure mu = ts::gauge_kms(golden_mean());
  ts::MatrixPtr b = golden_mean();
  for (const Word& w : ts::admissible_words(*b, 3))
    CHECK(ts::expectation(mu, LocallyConstantFunction::indicator(b, w)) == mu.mass(w));
  CHECK(std::abs(ts::expectation(mu, LocallyConstantFunction::constant(b, 1.0)) - 1.0) <=
        1e-14);
  CHECK(thrown_code([&] {
          ts::expectation(mu, LocallyConstantFunction::constant(full_shift2(), 1.0));
        }) == ErrorCode::MatrixMismatch);
}

TEST_CASE("measure levels and tables are consistent") {
  const ts::MarkovMeasure mu = ts::gauge_kms(golden_mean());
  for (int d = 0; d <= 8; ++d) {
    const std::vector<double> level = mu.level(d);
    CHECK(level.size() == ts::count_admissible_words(*mu.matrix(), d));
    double sum = 0.0;
    for (double v : level) {
      CHECK(v > 0.0);  // full support
      sum += v;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-14);
  }
  const auto table = mu.mass_table(3);
  CHECK(table.size() == 1 + 2 + 3 + 5);
  for (const auto& [word, mass] : table) CHECK(mass == mu.mass(word));
  CHECK(thrown_code([&] { mu.level(-1); }) == ErrorCode::BadInput);
  CHECK(thrown_code([&] { mu.mass_table(-2); }) == ErrorCode::BadInput);
}
