#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "test_support.hpp"
#include "thermoshift/io.hpp"
#include "thermoshift/transfer.hpp"

using namespace test_support;
using json = nlohmann::json;
using ts::ErrorCode;
using ts::LocallyConstantFunction;
using ts::Word;
namespace io = thermoshift::io;

TEST_CASE("doubles are printed with fifteen significant digits") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(1.0) == "1");
  CHECK(io::format_double(-2.5) == "-2.5");
  CHECK(io::format_double(2.0 / 3.0) == "0.666666666666667");
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const double v = dist(rng);
    const double r = io::round15(v);
    CHECK(io::round15(r) == r);  // the rounding is idempotent
    CHECK(std::abs(r - v) <= 1e-14 * std::abs(v));
  }
}

TEST_CASE("matrix text and json forms round trip") {
  ts::MatrixPtr b = golden_mean();
  CHECK(io::matrix_to_text(b) == "2\n1 1\n1 0\n");
  CHECK(ts::same_matrix(io::parse_matrix(io::matrix_to_text(b)), b));
  CHECK(ts::same_matrix(io::parse_matrix(io::matrix_to_json(b)), b));
  CHECK(ts::same_matrix(io::parse_matrix("2\n1 1\n1 0\n"), b));
  CHECK(ts::same_matrix(io::parse_matrix("  {\"n\": 2, \"rows\": [[1,1],[1,0]]}"), b));

  CHECK(thrown_code([] { io::parse_matrix("2\n1 1\n1\n"); }) == ErrorCode::BadInput);
  CHECK(thrown_code([] { io::parse_matrix("2\n1 1\n1 0\nextra"); }) == ErrorCode::BadInput);
  CHECK(thrown_code([] { io::parse_matrix("{\"rows\": [[1,1],[1,0]]}"); }) ==
        ErrorCode::BadInput);
  CHECK(thrown_code([] { io::parse_matrix("{\"n\": 3, \"rows\": [[1,1],[1,0]]}"); }) ==
        ErrorCode::BadInput);
  CHECK(thrown_code([] { io::parse_matrix("{broken"); }) == ErrorCode::BadInput);
  CHECK(thrown_code([] { io::parse_matrix("2\n1 0\n0 1\n"); }) == ErrorCode::NotIrreducible);
  CHECK(thrown_code([] { io::parse_matrix("{\"n\":2,\"rows\":[[0,1],[1,0]]}"); }) ==
        ErrorCode::IsPermutation);
}

TEST_CASE("function tables round trip through json") {
  ts::MatrixPtr b = golden_mean();
  const auto f = LocallyConstantFunction::from_table(
      b, 2, std::vector<std::int64_t>{5, -7, 11});
  const auto fi = io::parse_function(io::function_to_json(f), b);
  CHECK(fi.same_table(f));

  const auto g = LocallyConstantFunction::from_table(
      b, 2, std::vector<double>{0.5, -1.25, 3.0});
  CHECK(io::parse_function(io::function_to_json(g), b).same_table(g));

  // Arbitrary doubles survive up to the fifteen-digit print rounding.
  std::mt19937 rng(12);
  const auto h = random_real_function(rng, b, 3, -2.0, 2.0);
  const auto hi = io::parse_function(io::function_to_json(h), b);
  CHECK(hi.depth() == h.depth());
  for (std::size_t i = 0; i < h.table_size(); ++i)
    CHECK(hi.value(i) == io::round15(h.value(i)));
}

TEST_CASE("function parsing validates the word set") {
  ts::MatrixPtr b = golden_mean();
  const std::string good =
      R"({"depth": 1, "kind": "int", "values": {"1": 1, "2": 0}})";
  const auto f = io::parse_function(good, b);
  CHECK(f.kind() == ts::ValueKind::Integer);
  CHECK(f.evaluate_int(Word{1}) == 1);

  auto code_of = [&](const std::string& text) {
    return thrown_code([&] { io::parse_function(text, b); });
  };
  CHECK(code_of(R"({"depth": 1, "kind": "int", "values": {"1": 1}})") == ErrorCode::BadInput);
  CHECK(code_of(R"({"depth": 1, "kind": "int", "values": {"1": 1, "2": 0, "3": 2}})") ==
        ErrorCode::BadInput);
  CHECK(code_of(R"({"depth": 2, "kind": "int", "values": {"11":0,"12":0,"21":0,"22":0}})") ==
        ErrorCode::BadInput);
  CHECK(code_of(R"({"depth": 1, "kind": "int", "values": {"1": 1.5, "2": 0}})") ==
        ErrorCode::BadInput);
  CHECK(code_of(R"({"depth": 0, "kind": "int", "values": {}})") == ErrorCode::BadInput);
  CHECK(code_of(R"({"depth": 1, "kind": "float", "values": {"1": 1, "2": 0}})") ==
        ErrorCode::BadInput);
  CHECK(code_of(R"({"kind": "int", "values": {"1": 1, "2": 0}})") == ErrorCode::BadInput);
}

TEST_CASE("witnesses round trip through json") {
  const ts::CoeWitness w = ts::golden_example();
  const std::string text = io::witness_to_json(w);
  const ts::CoeWitness back = io::parse_witness(text);
  CHECK(ts::same_matrix(back.code.source(), w.code.source()));
  CHECK(ts::same_matrix(back.code.target(), w.code.target()));
  CHECK(back.code.images() == w.code.images());
  CHECK(back.k1.same_table(w.k1));
  CHECK(back.l1.same_table(w.l1));
  CHECK(back.k2.same_table(w.k2));
  CHECK(back.l2.same_table(w.l2));
  CHECK(ts::verify_equivalence(back, 8).passed);
  CHECK(io::witness_to_json(back) == text);

  const json j = json::parse(text);
  for (const char* key : {"source", "target", "tau", "k1", "l1", "k2", "l2"})
    CHECK(j.contains(key));
}

TEST_CASE("spectral reports expose a fixed schema") {
  const ts::RpfData data =
      ts::rpf(golden_mean(), LocallyConstantFunction::constant(golden_mean(), 0.0));
  const json jr = json::parse(io::rpf_to_json(data, 3));
  CHECK(jr.size() == 3);
  CHECK(jr.contains("eigenvalue"));
  CHECK(jr.contains("eigenfunction"));
  CHECK(jr.contains("measure_depth_table"));
  CHECK(std::abs(jr["eigenvalue"].get<double>() - kGoldenRatio) <= 1e-12);
  CHECK(jr["measure_depth_table"].contains(""));
  CHECK(jr["measure_depth_table"][""].get<double>() == 1.0);
  CHECK(std::abs(jr["measure_depth_table"]["1"].get<double>() - 1.0 / kGoldenRatio) <= 1e-12);

  const ts::KmsSolution sol = ts::solve_beta(
      full_shift2(), LocallyConstantFunction::constant(full_shift2(), std::int64_t{1}));
  const json jk = json::parse(io::kms_to_json(sol, 2));
  CHECK(jk.size() == 4);
  for (const char* key : {"beta", "log_beta", "f", "masses"})
    CHECK(jk.contains(key));
  CHECK(std::abs(jk["beta"].get<double>() - 2.0) <= 1e-10);

  const json je = json::parse(io::entropy_report_to_json(ts::perron(*full_shift2())));
  CHECK(std::abs(je["eigenvalue"].get<double>() - 2.0) <= 1e-12);
  CHECK(std::abs(je["entropy"].get<double>() - kLog2) <= 1e-12);
  CHECK(je["iterations"].get<int>() > 0);

  const json jz = json::parse(io::zeta_to_json(ts::zeta_series(*golden_mean(), 6)));
  CHECK(jz["rational_form"] == "1/(1 - z - z^2)");
  CHECK(jz["coefficients"] == json::array({"1", "1", "2", "3", "5", "8", "13"}));
  CHECK(jz["denominator"] == json::array({"1", "-1", "-1"}));
}

TEST_CASE("analysis reports expose a fixed schema") {
  const ts::CoeWitness w = ts::golden_example();
  const json jv = json::parse(io::verify_report_to_json(ts::verify_equivalence(w, 6), w));
  CHECK(jv["passed"] == true);
  CHECK(jv["depth"] == 6);
  CHECK(jv["violations"].is_array());

  const json js = json::parse(io::scoe_to_json(ts::is_scoe(w), 2));
  CHECK(js["strongly_equivalent"] == false);
  CHECK(js["coboundary"].is_null());
  CHECK(js["certificate"]["cycle"] == "2");
  CHECK(js["certificate"]["sum"] == 2);
  CHECK(js["certificate"]["period"] == 1);

  const json jc = json::parse(io::cocycles_to_json(w));
  CHECK(jc["c1"]["values"]["1"] == 1);
  CHECK(jc["c1"]["values"]["2"] == 2);
  CHECK(jc["c2"]["values"]["1"] == 1);
  CHECK(jc["c2"]["values"]["2"] == 0);

  const auto rows = ts::entropy_limit_sequence(w, 1, 3);
  const std::string csv = io::entropy_rows_to_csv(rows);
  CHECK(csv.rfind("n,E_n,entropy_estimate,r_pow_n_times_E_n\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  const json jrows = json::parse(io::entropy_rows_to_json(rows));
  CHECK(jrows["rows"].is_array());
  CHECK(jrows["rows"].size() == 3);
  CHECK(jrows["rows"][0]["n"] == 1);

  const json jh = json::parse(io::hn_report_to_json({{1, 0.0}, {2, 0.0}}));
  CHECK(jh["rows"].is_array());
  CHECK(jh["rows"].size() == 2);
  CHECK(jh["max_deviation"] == 0.0);

  const json jl = json::parse(io::limit_constants_to_json(ts::limit_constants(w, 1, 6)));
  CHECK(std::abs(jl["limit"].get<double>() - 1.0) <= 1e-10);
}

TEST_CASE("serialization is deterministic") {
  const ts::CoeWitness w = ts::golden_example();
  CHECK(io::witness_to_json(w) == io::witness_to_json(ts::golden_example()));
  const ts::RpfData d1 =
      ts::rpf(golden_mean(), LocallyConstantFunction::constant(golden_mean(), 0.0));
  const ts::RpfData d2 =
      ts::rpf(golden_mean(), LocallyConstantFunction::constant(golden_mean(), 0.0));
  CHECK(io::rpf_to_json(d1, 4) == io::rpf_to_json(d2, 4));
  CHECK(io::rpf_to_json(d1, 4).back() == '\n');
}

TEST_CASE("files round trip") {
  const std::string path = "/tmp/thermoshift-io-test.txt";
  io::write_file(path, "payload\n");
  CHECK(io::read_file(path) == "payload\n");
  CHECK(thrown_code([] { io::read_file("/tmp/thermoshift-does-not-exist-42"); }) ==
        ErrorCode::BadInput);
}
