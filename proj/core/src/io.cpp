#include "thermoshift/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "thermoshift/errors.hpp"

namespace thermoshift::io {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

double round15(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_double(v).c_str(), nullptr);
}

namespace {

json jnum(double v) { return json(round15(v)); }

json parse_json(const std::string& content) {
  try {
    return json::parse(content);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadInput, std::string("malformed JSON: ") + e.what());
  }
}

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw Error(ErrorCode::BadInput, std::string("missing field \"") + key + "\"");
  }
  return *it;
}

MatrixPtr matrix_from_json(const json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::BadInput, "matrix JSON must be an object");
  }
  const json& jn = field(j, "n");
  const json& jrows = field(j, "rows");
  if (!jn.is_number_integer() || !jrows.is_array()) {
    throw Error(ErrorCode::BadInput, "matrix JSON needs integer \"n\" and array \"rows\"");
  }
  TransitionMatrix::Rows rows;
  for (const json& r : jrows) {
    if (!r.is_array()) throw Error(ErrorCode::BadInput, "matrix rows must be arrays");
    std::vector<int> row;
    for (const json& x : r) {
      if (!x.is_number_integer()) {
        throw Error(ErrorCode::BadInput, "matrix entries must be integers");
      }
      row.push_back(x.get<int>());
    }
    rows.push_back(std::move(row));
  }
  if (jn.get<std::size_t>() != rows.size()) {
    throw Error(ErrorCode::BadInput, "matrix \"n\" does not match the number of rows");
  }
  return make_matrix(rows);
}

json matrix_json(const MatrixPtr& m) {
  json rows = json::array();
  for (const auto& row : m->rows()) rows.push_back(row);
  return json{{"n", m->size()}, {"rows", rows}};
}

LocallyConstantFunction function_from_json(const json& j, const MatrixPtr& m) {
  if (!j.is_object()) {
    throw Error(ErrorCode::BadInput, "function literal must be a JSON object");
  }
  const json& jd = field(j, "depth");
  const json& jk = field(j, "kind");
  const json& jv = field(j, "values");
  if (!jd.is_number_integer() || jd.get<int>() < 1) {
    throw Error(ErrorCode::BadInput, "function depth must be a positive integer");
  }
  if (!jk.is_string() || (jk.get<std::string>() != "int" && jk.get<std::string>() != "real")) {
    throw Error(ErrorCode::BadInput, "function kind must be \"int\" or \"real\"");
  }
  if (!jv.is_object()) {
    throw Error(ErrorCode::BadInput, "function values must be an object");
  }
  const int depth = jd.get<int>();
  const bool integer_kind = jk.get<std::string>() == "int";
  const WordIndex index(m, depth);
  for (const auto& item : jv.items()) {
    const Word w = parse_word(item.key(), m->size());
    if (static_cast<int>(w.size()) != depth || !index.find(w)) {
      throw Error(ErrorCode::BadInput,
                  "value given for a word that is not admissible at this depth: " + item.key());
    }
  }
  std::vector<std::int64_t> ivals;
  std::vector<double> rvals;
  for (std::size_t i = 0; i < index.size(); ++i) {
    const std::string key = format_word(index.word(i), m->size());
    auto it = jv.find(key);
    if (it == jv.end()) {
      throw Error(ErrorCode::BadInput, "missing value for admissible word " + key);
    }
    if (integer_kind) {
      if (!it->is_number_integer()) {
        throw Error(ErrorCode::BadInput, "integer function has non-integer value at " + key);
      }
      ivals.push_back(it->get<std::int64_t>());
    } else {
      if (!it->is_number()) {
        throw Error(ErrorCode::BadInput, "function value at " + key + " is not a number");
      }
      rvals.push_back(it->get<double>());
    }
  }
  if (integer_kind) {
    return LocallyConstantFunction::from_table(m, depth, std::move(ivals));
  }
  return LocallyConstantFunction::from_table(m, depth, std::move(rvals));
}

json function_json(const LocallyConstantFunction& f) {
  const int n = f.matrix()->size();
  json values = json::object();
  for (std::size_t i = 0; i < f.table_size(); ++i) {
    const std::string key = format_word(f.index().word(i), n);
    if (f.kind() == ValueKind::Integer) {
      values[key] = f.ivalue(i);
    } else {
      values[key] = jnum(f.value(i));
    }
  }
  return json{{"depth", f.depth()},
              {"kind", f.kind() == ValueKind::Integer ? "int" : "real"},
              {"values", values}};
}

json mass_table_json(const MarkovMeasure& mu, int max_depth) {
  json out = json::object();
  for (const auto& [word, mass] : mu.mass_table(max_depth)) {
    out[format_word(word, mu.matrix()->size())] = jnum(mass);
  }
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::BadInput, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::BadInput, "cannot write " + path);
  out << content;
  if (!out.flush()) throw Error(ErrorCode::BadInput, "short write to " + path);
}

MatrixPtr parse_matrix(const std::string& content) {
  std::size_t i = 0;
  while (i < content.size() && std::isspace(static_cast<unsigned char>(content[i]))) ++i;
  if (i == content.size()) throw Error(ErrorCode::BadInput, "empty matrix input");
  if (content[i] == '{') return matrix_from_json(parse_json(content));

  std::istringstream in(content);
  int n = 0;
  if (!(in >> n) || n <= 0) {
    throw Error(ErrorCode::BadInput, "matrix text must start with the dimension");
  }
  TransitionMatrix::Rows rows(static_cast<std::size_t>(n),
                              std::vector<int>(static_cast<std::size_t>(n), 0));
  for (auto& row : rows) {
    for (auto& x : row) {
      if (!(in >> x)) {
        throw Error(ErrorCode::BadInput, "matrix text ends before all entries are read");
      }
    }
  }
  std::string rest;
  if (in >> rest) {
    throw Error(ErrorCode::BadInput, "unexpected trailing content in matrix text: " + rest);
  }
  return make_matrix(rows);
}

std::string matrix_to_text(const MatrixPtr& m) {
  std::ostringstream out;
  out << m->size() << "\n";
  for (const auto& row : m->rows()) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ' ';
      out << row[j];
    }
    out << "\n";
  }
  return out.str();
}

std::string matrix_to_json(const MatrixPtr& m) { return dump(matrix_json(m)); }

LocallyConstantFunction parse_function(const std::string& content, const MatrixPtr& m) {
  return function_from_json(parse_json(content), m);
}

std::string function_to_json(const LocallyConstantFunction& f) {
  return dump(function_json(f));
}

CoeWitness parse_witness(const std::string& content) {
  const json j = parse_json(content);
  const MatrixPtr source = matrix_from_json(field(j, "source"));
  const MatrixPtr target = matrix_from_json(field(j, "target"));
  const json& jtau = field(j, "tau");
  if (!jtau.is_object() || jtau.size() != static_cast<std::size_t>(source->size())) {
    throw Error(ErrorCode::BadInput, "tau must map every source symbol to a target word");
  }
  std::vector<Word> images;
  images.reserve(static_cast<std::size_t>(source->size()));
  for (int a = 1; a <= source->size(); ++a) {
    auto it = jtau.find(std::to_string(a));
    if (it == jtau.end() || !it->is_string()) {
      throw Error(ErrorCode::BadInput, "tau is missing symbol " + std::to_string(a));
    }
    images.push_back(parse_word(it->get<std::string>(), target->size()));
  }
  SubstitutionCode code = SubstitutionCode::build(source, target, std::move(images));
  return CoeWitness::build(std::move(code), function_from_json(field(j, "k1"), source),
                           function_from_json(field(j, "l1"), source),
                           function_from_json(field(j, "k2"), target),
                           function_from_json(field(j, "l2"), target));
}

std::string witness_to_json(const CoeWitness& w) {
  json tau = json::object();
  for (int a = 1; a <= w.code.source()->size(); ++a) {
    tau[std::to_string(a)] = format_word(w.code.image(a), w.code.target()->size());
  }
  return dump(json{{"source", matrix_json(w.code.source())},
                   {"target", matrix_json(w.code.target())},
                   {"tau", tau},
                   {"k1", function_json(w.k1)},
                   {"l1", function_json(w.l1)},
                   {"k2", function_json(w.k2)},
                   {"l2", function_json(w.l2)}});
}

std::string entropy_report_to_json(const PerronData& data) {
  return dump(json{{"eigenvalue", jnum(data.eigenvalue)},
                   {"entropy", jnum(std::log(data.eigenvalue))},
                   {"iterations", data.iterations}});
}

std::string rpf_to_json(const RpfData& data, int mass_depth) {
  return dump(json{{"eigenvalue", jnum(data.eigenvalue)},
                   {"eigenfunction", function_json(data.eigenfunction)},
                   {"measure_depth_table", mass_table_json(data.eigenmeasure, mass_depth)}});
}

std::string kms_to_json(const KmsSolution& sol, int mass_depth) {
  return dump(json{{"beta", jnum(sol.beta)},
                   {"log_beta", jnum(sol.log_beta())},
                   {"f", function_json(sol.gauge_function)},
                   {"masses", mass_table_json(sol.measure, mass_depth)}});
}

std::string zeta_to_json(const ZetaSeries& z) {
  json coeffs = json::array();
  for (const BigInt& c : z.coefficients) coeffs.push_back(c.str());
  json den = json::array();
  for (const BigInt& c : z.denominator) den.push_back(c.str());
  return dump(json{{"coefficients", coeffs},
                   {"denominator", den},
                   {"rational_form", z.rational_form()},
                   {"cross_check", jnum(z.cross_check)}});
}

std::string verify_report_to_json(const VerifyReport& report, const CoeWitness& w) {
  json violations = json::array();
  for (const auto& v : report.violations) {
    const int alphabet =
        v.equation == 1 ? w.code.source()->size() : w.code.target()->size();
    violations.push_back(json{{"equation", v.equation},
                              {"word", format_word(v.word, alphabet)},
                              {"detail", v.detail}});
  }
  return dump(json{{"passed", report.passed},
                   {"depth", report.depth},
                   {"words_checked", report.words_checked},
                   {"violations", violations}});
}

std::string scoe_to_json(const ScoeResult& result, int alphabet) {
  json j{{"strongly_equivalent", result.strongly_equivalent}};
  j["coboundary"] = result.coboundary ? function_json(*result.coboundary) : json();
  if (result.obstruction) {
    j["certificate"] = json{{"cycle", format_word(result.obstruction->cycle, alphabet)},
                            {"sum", result.obstruction->cocycle_sum},
                            {"period", result.obstruction->period}};
  } else {
    j["certificate"] = json();
  }
  return dump(j);
}

std::string cocycles_to_json(const CoeWitness& w) {
  return dump(json{{"c1", function_json(cocycle(w, 1))}, {"c2", function_json(cocycle(w, 2))}});
}

std::string limit_constants_to_json(const LimitConstants& c) {
  json scaled = json::array();
  for (double v : c.scaled) scaled.push_back(jnum(v));
  return dump(json{{"limit", jnum(c.limit)},
                   {"tail_oscillation", jnum(c.tail_oscillation)},
                   {"scaled", scaled}});
}

std::string hn_report_to_json(const std::vector<std::pair<int, double>>& rows) {
  json jrows = json::array();
  double worst = 0.0;
  for (const auto& [n, dev] : rows) {
    jrows.push_back(json{{"n", n}, {"deviation", jnum(dev)}});
    worst = std::max(worst, dev);
  }
  return dump(json{{"rows", jrows}, {"max_deviation", jnum(worst)}});
}

std::string entropy_rows_to_json(const std::vector<EntropyLimitRow>& rows) {
  json jrows = json::array();
  for (const auto& row : rows) {
    jrows.push_back(json{{"n", row.n},
                         {"E_n", jnum(row.value)},
                         {"entropy_estimate", jnum(row.entropy_estimate)},
                         {"r_pow_n_times_E_n", jnum(row.scaled)}});
  }
  return dump(json{{"rows", jrows}});
}

std::string entropy_rows_to_csv(const std::vector<EntropyLimitRow>& rows) {
  std::string out = "n,E_n,entropy_estimate,r_pow_n_times_E_n\n";
  for (const auto& row : rows) {
    out += std::to_string(row.n);
    out += ',';
    out += format_double(row.value);
    out += ',';
    out += format_double(row.entropy_estimate);
    out += ',';
    out += format_double(row.scaled);
    out += '\n';
  }
  return out;
}

}  // namespace thermoshift::io
