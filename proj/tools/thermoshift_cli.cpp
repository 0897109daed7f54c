#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "thermoshift/coe.hpp"
#include "thermoshift/io.hpp"
#include "thermoshift/kms.hpp"
#include "thermoshift/zeta.hpp"

namespace ts = thermoshift;

namespace {

struct RunConfig {
  std::optional<double> tolerance;  // overrides both iteration and root tolerances
  int max_iter = ts::kDefaultMaxIter;
  std::string format;  // empty = per-command default
  std::string output;  // empty = stdout
  bool parallel = false;
  int depth_cap = 24;

  double eig_tol() const { return tolerance.value_or(ts::kDefaultEigTol); }
  double root_tol() const { return tolerance.value_or(ts::kDefaultRootTol); }
};

void validate_config(RunConfig& cfg) {
  if (cfg.tolerance && (*cfg.tolerance <= 0.0 || *cfg.tolerance > 1e-3)) {
    throw ts::Error(ts::ErrorCode::BadInput, "tolerance must lie in (0, 1e-3]");
  }
  if (cfg.max_iter < 1) {
    throw ts::Error(ts::ErrorCode::BadInput, "max-iter must be positive");
  }
  if (const char* env = std::getenv("THERMOSHIFT_MAX_DEPTH")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 64) {
      throw ts::Error(ts::ErrorCode::BadInput, "THERMOSHIFT_MAX_DEPTH must be an integer in [1, 64]");
    }
    cfg.depth_cap = static_cast<int>(v);
  }
}

void check_depth(const RunConfig& cfg, int depth, const char* what) {
  if (depth < 1 || depth > cfg.depth_cap) {
    throw ts::Error(ts::ErrorCode::BadInput,
                    std::string(what) + " must lie in [1, " + std::to_string(cfg.depth_cap) +
                        "] (cap adjustable via THERMOSHIFT_MAX_DEPTH)");
  }
}

int verify_threads(const RunConfig& cfg) {
  if (!cfg.parallel) return 1;
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::max(2u, hw));
}

void emit(const RunConfig& cfg, const std::string& content) {
  if (cfg.output.empty()) {
    std::cout << content;
  } else {
    ts::io::write_file(cfg.output, content);
  }
}

std::string pick_format(const RunConfig& cfg, const std::string& fallback) {
  return cfg.format.empty() ? fallback : cfg.format;
}

[[noreturn]] void bad_format(const std::string& fmt) {
  throw ts::Error(ts::ErrorCode::BadInput, "format \"" + fmt + "\" is not available here");
}

std::string bool_word(bool b) { return b ? "true" : "false"; }

// ---------------------------------------------------------------------------

int run_entropy(const RunConfig& cfg, const std::string& matrix_path) {
  const ts::MatrixPtr m = ts::io::parse_matrix(ts::io::read_file(matrix_path));
  const ts::PerronData data = ts::perron(*m, cfg.eig_tol(), cfg.max_iter);
  const std::string fmt = pick_format(cfg, "text");
  if (fmt == "json") {
    emit(cfg, ts::io::entropy_report_to_json(data));
  } else if (fmt == "text") {
    std::ostringstream out;
    out << "eigenvalue: " << ts::io::format_double(data.eigenvalue) << "\n"
        << "entropy: " << ts::io::format_double(std::log(data.eigenvalue)) << "\n"
        << "iterations: " << data.iterations << "\n";
    emit(cfg, out.str());
  } else {
    bad_format(fmt);
  }
  return 0;
}

int run_rpf(const RunConfig& cfg, const std::string& matrix_path,
            const std::string& potential_path, int depth) {
  const ts::MatrixPtr m = ts::io::parse_matrix(ts::io::read_file(matrix_path));
  ts::LocallyConstantFunction phi = ts::io::parse_function(ts::io::read_file(potential_path), m);
  if (depth > 0) {
    check_depth(cfg, depth, "depth");
    phi = phi.promote(depth);
  } else {
    check_depth(cfg, phi.depth(), "potential depth");
  }
  const ts::RpfData data = ts::rpf(m, phi, cfg.eig_tol(), cfg.max_iter);
  const int mass_depth = std::max(2, phi.depth());
  const std::string fmt = pick_format(cfg, "json");
  if (fmt == "json") {
    emit(cfg, ts::io::rpf_to_json(data, mass_depth));
  } else if (fmt == "text") {
    std::ostringstream out;
    out << "eigenvalue: " << ts::io::format_double(data.eigenvalue) << "\n"
        << "iterations: " << data.iterations << "\n"
        << "residual_right: " << ts::io::format_double(data.residual_right) << "\n"
        << "residual_left: " << ts::io::format_double(data.residual_left) << "\n";
    emit(cfg, out.str());
  } else {
    bad_format(fmt);
  }
  return 0;
}

int run_kms(const RunConfig& cfg, const std::string& matrix_path, const std::string& gauge_path,
            std::optional<double> beta, bool solve, const std::vector<double>& bracket,
            int emit_masses) {
  if (solve == beta.has_value()) {
    throw ts::Error(ts::ErrorCode::BadInput, "pass exactly one of --beta and --solve");
  }
  const ts::MatrixPtr m = ts::io::parse_matrix(ts::io::read_file(matrix_path));
  const ts::LocallyConstantFunction f = ts::io::parse_function(ts::io::read_file(gauge_path), m);
  std::optional<ts::BetaBracket> window;
  if (!bracket.empty()) {
    if (bracket.size() != 2 || !(bracket[0] < bracket[1])) {
      throw ts::Error(ts::ErrorCode::BadInput, "--bracket needs LO HI with LO < HI");
    }
    window = ts::BetaBracket{bracket[0], bracket[1]};
  }
  const int mass_depth = emit_masses > 0 ? emit_masses : f.depth() + 2;
  check_depth(cfg, mass_depth, "emit-masses depth");

  int rc = 0;
  double check = 0.0;
  std::optional<ts::KmsSolution> sol;
  if (solve) {
    sol = ts::solve_beta(m, f, window, cfg.root_tol(), cfg.eig_tol(), cfg.max_iter);
    check = ts::kms_condition_check(f, sol->beta, sol->measure, f.depth() + 3);
  } else {
    if (*beta <= 1.0) {
      throw ts::Error(ts::ErrorCode::BadInput, "beta must exceed 1");
    }
    const ts::LocallyConstantFunction one =
        ts::LocallyConstantFunction::constant(m, static_cast<std::int64_t>(1));
    const ts::LocallyConstantFunction phi = ts::scale(one - f, std::log(*beta));
    ts::RpfData spectral = ts::rpf(m, phi, cfg.eig_tol(), cfg.max_iter);
    ts::MarkovMeasure measure = spectral.eigenmeasure;
    sol = ts::KmsSolution{f, *beta, phi, std::move(measure), std::move(spectral)};
    check = ts::kms_condition_check(f, *beta, sol->measure, f.depth() + 3);
    if (check > 1e-8) {
      std::cerr << "warning: KMS condition deviates by " << ts::io::format_double(check)
                << " at beta " << ts::io::format_double(*beta) << "\n";
      rc = 4;
    }
  }

  const std::string fmt = pick_format(cfg, "json");
  if (fmt == "json") {
    emit(cfg, ts::io::kms_to_json(*sol, mass_depth));
  } else if (fmt == "text") {
    std::ostringstream out;
    out << "beta: " << ts::io::format_double(sol->beta) << "\n"
        << "log_beta: " << ts::io::format_double(sol->log_beta()) << "\n"
        << "condition_check: " << ts::io::format_double(check) << "\n";
    emit(cfg, out.str());
  } else {
    bad_format(fmt);
  }
  return rc;
}

int run_zeta(const RunConfig& cfg, const std::string& matrix_path, int terms) {
  const ts::MatrixPtr m = ts::io::parse_matrix(ts::io::read_file(matrix_path));
  const ts::ZetaSeries z = ts::zeta_series(*m, terms);
  const std::string fmt = pick_format(cfg, "text");
  if (fmt == "json") {
    emit(cfg, ts::io::zeta_to_json(z));
  } else if (fmt == "text") {
    std::ostringstream out;
    out << "rational_form: " << z.rational_form() << "\n" << "coefficients:";
    for (const ts::BigInt& c : z.coefficients) out << ' ' << c.str();
    out << "\n";
    emit(cfg, out.str());
  } else {
    bad_format(fmt);
  }
  return 0;
}

// ---------------------------------------------------------------------------

ts::CoeWitness load_witness(const std::string& path) {
  return ts::io::parse_witness(ts::io::read_file(path));
}

int run_coe_verify(const RunConfig& cfg, const std::string& witness_path, int depth) {
  const ts::CoeWitness w = load_witness(witness_path);
  check_depth(cfg, depth, "depth");
  const ts::VerifyReport report = ts::verify_equivalence(w, depth, verify_threads(cfg));
  const std::string fmt = pick_format(cfg, "text");
  if (fmt == "json") {
    emit(cfg, ts::io::verify_report_to_json(report, w));
  } else if (fmt == "text") {
    std::ostringstream out;
    out << "passed: " << bool_word(report.passed) << "\n"
        << "depth: " << report.depth << "\n"
        << "words_checked: " << report.words_checked << "\n"
        << "violations: " << report.violations.size() << "\n";
    for (const auto& v : report.violations) {
      const int alphabet =
          v.equation == 1 ? w.code.source()->size() : w.code.target()->size();
      out << "violation: equation " << v.equation << " word "
          << ts::format_word(v.word, alphabet) << " (" << v.detail << ")\n";
    }
    emit(cfg, out.str());
  } else {
    bad_format(fmt);
  }
  return report.passed ? 0 : 4;
}

int run_coe_cocycles(const RunConfig& cfg, const std::string& witness_path) {
  const ts::CoeWitness w = load_witness(witness_path);
  const std::string fmt = pick_format(cfg, "json");
  if (fmt == "json") {
    emit(cfg, ts::io::cocycles_to_json(w));
  } else if (fmt == "text") {
    std::ostringstream out;
    for (int side = 1; side <= 2; ++side) {
      const ts::LocallyConstantFunction c = ts::cocycle(w, side);
      const int alphabet = c.matrix()->size();
      for (std::size_t i = 0; i < c.table_size(); ++i) {
        out << "c" << side << "(" << ts::format_word(c.index().word(i), alphabet)
            << "): " << c.ivalue(i) << "\n";
      }
    }
    emit(cfg, out.str());
  } else {
    bad_format(fmt);
  }
  return 0;
}

int run_coe_scoe(const RunConfig& cfg, const std::string& witness_path) {
  const ts::CoeWitness w = load_witness(witness_path);
  const ts::ScoeResult result = ts::is_scoe(w);
  const int alphabet = w.code.source()->size();
  const std::string fmt = pick_format(cfg, "text");
  if (fmt == "json") {
    emit(cfg, ts::io::scoe_to_json(result, alphabet));
  } else if (fmt == "text") {
    std::ostringstream out;
    out << "strongly_equivalent: " << bool_word(result.strongly_equivalent) << "\n";
    if (result.coboundary) {
      const auto& b = *result.coboundary;
      for (std::size_t i = 0; i < b.table_size(); ++i) {
        out << "b1(" << ts::format_word(b.index().word(i), alphabet) << "): ";
        if (b.kind() == ts::ValueKind::Integer) {
          out << b.ivalue(i);
        } else {
          out << ts::io::format_double(b.value(i));
        }
        out << "\n";
      }
    }
    if (result.obstruction) {
      out << "certificate_cycle: " << ts::format_word(result.obstruction->cycle, alphabet) << "\n"
          << "certificate_sum: " << result.obstruction->cocycle_sum << "\n"
          << "certificate_period: " << result.obstruction->period << "\n";
    }
    emit(cfg, out.str());
  } else {
    bad_format(fmt);
  }
  return 0;
}

int run_coe_limit(const RunConfig& cfg, const std::string& witness_path, int side, int n_max,
                  bool constants) {
  const ts::CoeWitness w = load_witness(witness_path);
  if (side != 1 && side != 2) {
    throw ts::Error(ts::ErrorCode::BadInput, "side must be 1 or 2");
  }
  if (n_max < 1) {
    throw ts::Error(ts::ErrorCode::BadInput, "n-max must be positive");
  }
  if (constants) {
    const ts::LimitConstants c =
        ts::limit_constants(w, side, n_max, cfg.eig_tol(), cfg.max_iter);
    const std::string fmt = pick_format(cfg, "text");
    if (fmt == "json") {
      emit(cfg, ts::io::limit_constants_to_json(c));
    } else if (fmt == "text") {
      std::ostringstream out;
      out << "limit: " << ts::io::format_double(c.limit) << "\n"
          << "tail_oscillation: " << ts::io::format_double(c.tail_oscillation) << "\n";
      emit(cfg, out.str());
    } else {
      bad_format(fmt);
    }
    return 0;
  }
  const auto rows = ts::entropy_limit_sequence(w, side, n_max, cfg.eig_tol(), cfg.max_iter);
  const std::string fmt = pick_format(cfg, "csv");
  if (fmt == "csv" || fmt == "text") {
    emit(cfg, ts::io::entropy_rows_to_csv(rows));
  } else if (fmt == "json") {
    emit(cfg, ts::io::entropy_rows_to_json(rows));
  } else {
    bad_format(fmt);
  }
  return 0;
}

bool is_golden_witness(const ts::CoeWitness& w) {
  const ts::CoeWitness g = ts::golden_example();
  if (!ts::same_matrix(w.code.source(), g.code.source())) return false;
  if (!ts::same_matrix(w.code.target(), g.code.target())) return false;
  if (w.code.images() != g.code.images()) return false;
  return w.k1.same_table(g.k1) && w.l1.same_table(g.l1) && w.k2.same_table(g.k2) &&
         w.l2.same_table(g.l2);
}

int run_coe_hn(const RunConfig& cfg, const std::string& witness_path, int n_max) {
  const ts::CoeWitness w = load_witness(witness_path);
  if (!is_golden_witness(w)) {
    throw ts::Error(ts::ErrorCode::BadInput,
                    "hn-check applies to the built-in example witness only");
  }
  if (n_max < 1 || n_max > 30) {
    throw ts::Error(ts::ErrorCode::BadInput, "n-max must lie in [1, 30]");
  }
  std::vector<std::pair<int, double>> rows(static_cast<std::size_t>(n_max));
  if (cfg.parallel) {
    std::vector<std::future<double>> tasks;
    tasks.reserve(rows.size());
    for (int n = 1; n <= n_max; ++n) {
      tasks.push_back(std::async(std::launch::async, [n] { return ts::hn_check(n); }));
    }
    for (int n = 1; n <= n_max; ++n) {
      rows[static_cast<std::size_t>(n - 1)] = {n, tasks[static_cast<std::size_t>(n - 1)].get()};
    }
  } else {
    for (int n = 1; n <= n_max; ++n) {
      rows[static_cast<std::size_t>(n - 1)] = {n, ts::hn_check(n)};
    }
  }
  double worst = 0.0;
  for (const auto& [n, dev] : rows) worst = std::max(worst, dev);

  const std::string fmt = pick_format(cfg, "text");
  if (fmt == "json") {
    emit(cfg, ts::io::hn_report_to_json(rows));
  } else if (fmt == "csv") {
    std::string out = "n,deviation\n";
    for (const auto& [n, dev] : rows) {
      out += std::to_string(n);
      out += ',';
      out += ts::io::format_double(dev);
      out += '\n';
    }
    emit(cfg, out);
  } else if (fmt == "text") {
    std::ostringstream out;
    for (const auto& [n, dev] : rows) {
      out << "n=" << n << " deviation=" << ts::io::format_double(dev) << "\n";
    }
    out << "max_deviation: " << ts::io::format_double(worst) << "\n";
    emit(cfg, out.str());
  } else {
    bad_format(fmt);
  }
  return worst == 0.0 ? 0 : 4;
}

int run_example(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw ts::Error(ts::ErrorCode::BadInput, "cannot create directory " + dir);
  }
  const ts::CoeWitness w = ts::golden_example();
  const ts::MatrixPtr source = w.code.source();
  const ts::MatrixPtr target = w.code.target();
  const ts::LocallyConstantFunction ones =
      ts::LocallyConstantFunction::constant(source, static_cast<std::int64_t>(1));

  const std::vector<std::pair<std::string, std::string>> files = {
      {"witness.json", ts::io::witness_to_json(w)},
      {"source_matrix.txt", ts::io::matrix_to_text(source)},
      {"target_matrix.txt", ts::io::matrix_to_text(target)},
      {"c1.json", ts::io::function_to_json(ts::cocycle(w, 1))},
      {"c2.json", ts::io::function_to_json(ts::cocycle(w, 2))},
      {"ones.json", ts::io::function_to_json(ones)},
  };
  for (const auto& [name, content] : files) {
    const std::string path = (fs::path(dir) / name).string();
    ts::io::write_file(path, content);
    std::cout << path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermodynamic formalism on one-sided topological Markov shifts"};
  app.require_subcommand(1);

  RunConfig cfg;
  app.add_option("--tolerance", cfg.tolerance,
                 "Override iteration and root tolerances (in (0, 1e-3])");
  app.add_option("--max-iter", cfg.max_iter, "Power iteration budget");
  app.add_option("--format", cfg.format, "Output format: text, json or csv");
  app.add_option("--output", cfg.output, "Write output to this file instead of stdout");
  app.add_flag("--parallel", cfg.parallel, "Run independent work items concurrently");

  std::string matrix_path, potential_path, gauge_path, witness_path;
  std::string example_dir = "thermoshift-example";
  int depth = 0, terms = 0, n_max = 0, side = 1;
  std::optional<double> beta;
  bool solve = false;
  std::vector<double> bracket;

  auto* entropy_cmd = app.add_subcommand("entropy", "Perron eigenvalue and topological entropy");
  entropy_cmd->add_option("matrix", matrix_path, "Transition matrix file")->required();

  auto* rpf_cmd = app.add_subcommand("rpf", "Transfer operator eigendata for a potential");
  rpf_cmd->add_option("matrix", matrix_path, "Transition matrix file")->required();
  rpf_cmd->add_option("potential", potential_path, "Potential function file")->required();
  rpf_cmd->add_option("--depth", depth, "Promote the potential to this depth");

  auto* kms_cmd = app.add_subcommand("kms", "Equilibrium measure of a generalized gauge action");
  kms_cmd->add_option("matrix", matrix_path, "Transition matrix file")->required();
  kms_cmd->add_option("gauge", gauge_path, "Gauge function file")->required();
  kms_cmd->add_option("--beta", beta, "Check and report at this inverse temperature");
  kms_cmd->add_flag("--solve", solve, "Solve for the unique admissible beta");
  kms_cmd->add_option("--bracket", bracket, "Root bracket LO HI for --solve")->expected(2);
  kms_cmd->add_option("--emit-masses", depth, "Mass table depth in the report");

  auto* zeta_cmd = app.add_subcommand("zeta", "Dynamical zeta function series");
  zeta_cmd->add_option("matrix", matrix_path, "Transition matrix file")->required();
  zeta_cmd->add_option("--terms", terms, "Number of series terms (positive)")
      ->required()
      ->check(CLI::PositiveNumber);

  auto* coe_cmd = app.add_subcommand("coe", "Continuous orbit equivalence analysis");
  coe_cmd->require_subcommand(1);
  auto* verify_cmd = coe_cmd->add_subcommand("verify", "Check the intertwining identities");
  verify_cmd->add_option("witness", witness_path, "Witness file")->required();
  verify_cmd->add_option("--depth", depth, "Verification depth");
  auto* cocycles_cmd = coe_cmd->add_subcommand("cocycles", "Emit c1 and c2");
  cocycles_cmd->add_option("witness", witness_path, "Witness file")->required();
  auto* scoe_cmd = coe_cmd->add_subcommand("scoe", "Decide strong orbit equivalence");
  scoe_cmd->add_option("witness", witness_path, "Witness file")->required();
  auto* limit_cmd = coe_cmd->add_subcommand("entropy-limit", "Entropy limit sequence");
  limit_cmd->add_option("witness", witness_path, "Witness file")->required();
  limit_cmd->add_option("--side", side, "Ambient shift: 1 source, 2 target");
  limit_cmd->add_option("--n-max", n_max, "Number of sequence terms");
  auto* constants_cmd = coe_cmd->add_subcommand("constants", "Tail constants of r^n E_n");
  constants_cmd->add_option("witness", witness_path, "Witness file")->required();
  constants_cmd->add_option("--side", side, "Ambient shift: 1 source, 2 target");
  constants_cmd->add_option("--n-max", n_max, "Number of sequence terms");
  auto* hn_cmd = coe_cmd->add_subcommand("hn-check", "Exact counting identity check");
  hn_cmd->add_option("witness", witness_path, "Witness file")->required();
  hn_cmd->add_option("--n-max", n_max, "Largest n to check");

  auto* example_cmd = app.add_subcommand("example", "Write the built-in example files");
  example_cmd->add_option("directory", example_dir, "Output directory");

  // Global flags are defined on the root; let every subcommand hand the ones
  // it does not know back up the chain.
  const std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* node) {
    for (CLI::App* sub : node->get_subcommands([](CLI::App*) { return true; })) {
      sub->fallthrough();
      enable_fallthrough(sub);
    }
  };
  enable_fallthrough(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    validate_config(cfg);
    if (*entropy_cmd) return run_entropy(cfg, matrix_path);
    if (*rpf_cmd) return run_rpf(cfg, matrix_path, potential_path, depth);
    if (*kms_cmd) return run_kms(cfg, matrix_path, gauge_path, beta, solve, bracket, depth);
    if (*zeta_cmd) return run_zeta(cfg, matrix_path, terms);
    if (*verify_cmd) return run_coe_verify(cfg, witness_path, depth > 0 ? depth : 12);
    if (*cocycles_cmd) return run_coe_cocycles(cfg, witness_path);
    if (*scoe_cmd) return run_coe_scoe(cfg, witness_path);
    if (*limit_cmd) return run_coe_limit(cfg, witness_path, side, n_max > 0 ? n_max : 20, false);
    if (*constants_cmd)
      return run_coe_limit(cfg, witness_path, side, n_max > 0 ? n_max : 30, true);
    if (*hn_cmd) return run_coe_hn(cfg, witness_path, n_max > 0 ? n_max : 15);
    if (*example_cmd) return run_example(example_dir);
  } catch (const ts::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ts::ErrorCode::NoConvergence:
      case ts::ErrorCode::NoBracket:
        return 3;
      case ts::ErrorCode::ContractViolation:
        return 4;
      default:
        return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
