// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "matmult/matmult.hpp"

namespace matmult::cli {
namespace {

using Json = nlohmann::json;
namespace jio = matmult::json;

struct RunConfig {
  std::string command;
  std::string law_path;
  std::string x = "100000";
  std::string x_grid = "1000:10000000:10";
  int k = 1;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  int N = 2;
  std::string prime_bound = "10000000";
  std::string flavor;
  std::string out;
  double delta = 1e-3;
  int max_depth = 16;
  std::string budget = "10000000";
  bool require_mean_zero = false;
  std::string mc_max_x = "1000000";
  unsigned threads = 0;
};

// Accepts plain integers and exact scientific notation such as 1e6.
std::uint64_t parse_count(const std::string& text, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParseError(std::string("--") + what + ": not a number: " + text);
  }
  if (used != text.size() || !(v >= 0.0) || v != std::floor(v) || v > 1.8e19) {
    throw ParseError(std::string("--") + what + ": expected a non-negative integer, got " + text);
  }
  if (text.find_first_of(".eE") == std::string::npos) return std::stoull(text);
  return static_cast<std::uint64_t>(v);
}

std::vector<std::uint64_t> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() != 3) throw ParseError("--x-grid must have the form a:b:mult");
  const std::uint64_t a = parse_count(parts[0], "x-grid");
  const std::uint64_t b = parse_count(parts[1], "x-grid");
  const std::uint64_t mult = parse_count(parts[2], "x-grid");
  if (a < 1) throw InvariantError("--x-grid start must be at least 1");
  if (mult < 2) throw InvariantError("--x-grid multiplier must be at least 2");
  std::vector<std::uint64_t> grid;
  for (std::uint64_t x = a; x <= b; x *= mult) {
    grid.push_back(x);
    if (x > b / mult) break;
  }
  return grid;
}

unsigned threads_from_env() {
  const char* env = std::getenv("MATMULT_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  const std::uint64_t n = parse_count(env, "MATMULT_THREADS");
  if (n < 1 || n > 4096) throw InvariantError("MATMULT_THREADS must lie in 1..4096");
  return static_cast<unsigned>(n);
}

Flavor resolve_flavor(const RunConfig& cfg, const MatrixLaw& law) {
  if (cfg.flavor.empty()) return natural_flavor(law);
  return cfg.flavor == "real" ? Flavor::Real : Flavor::Complex;
}

Json config_echo(const RunConfig& cfg) {
  Json c = {{"command", cfg.command}, {"threads", cfg.threads}};
  if (!cfg.law_path.empty()) c["law"] = cfg.law_path;
  const std::string& cmd = cfg.command;
  const bool uses_x = cmd == "exact" || cmd == "mc" || cmd == "sieve-stats";
  if (uses_x) c["x"] = parse_count(cfg.x, "x");
  if (cmd == "report") {
    c["x_grid"] = cfg.x_grid;
    c["mc_max_x"] = parse_count(cfg.mc_max_x, "mc-max-x");
  }
  if (cmd == "operator" || cmd == "recurrence" || cmd == "mc" || cmd == "jsr") c["k"] = cfg.k;
  if (cmd == "mc" || cmd == "report") {
    c["trials"] = cfg.trials;
    c["seed"] = cfg.seed;
  }
  if (cmd == "constants" || cmd == "exact" || cmd == "report") {
    c["N"] = cfg.N;
    c["prime_bound"] = parse_count(cfg.prime_bound, "prime-bound");
  }
  if (cmd != "validate" && cmd != "sieve-stats" && cmd != "jsr" && cmd != "mc") {
    c["flavor"] = cfg.flavor.empty() ? "natural" : cfg.flavor;
  }
  if (cmd == "jsr") {
    c["delta"] = cfg.delta;
    c["max_depth"] = cfg.max_depth;
    c["budget"] = parse_count(cfg.budget, "budget");
  }
  if (cmd == "validate") c["require_mean_zero"] = cfg.require_mean_zero;
  if (!cfg.out.empty()) c["out"] = cfg.out;
  return c;
}

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ParseError("cannot open output file " + path);
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void emit(const RunConfig& cfg, Json result, std::ostream& out) {
  using Ordered = nlohmann::ordered_json;
  Ordered doc;
  doc["schema_version"] = jio::kSchemaVersion;
  doc["command"] = cfg.command;
  doc["config"] = Ordered::parse(config_echo(cfg).dump());
  doc["result"] = Ordered::parse(result.dump());
  Sink sink(cfg.out, out);
  sink.stream() << doc.dump(2) << '\n';
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", jio::kSignificantDigits, v);
  return buf;
}

MomentSequence second_moment_sequence(const MatrixLaw& law, Flavor flavor, std::size_t n_max) {
  return exact_moment_sequence(build_transfer(law, 1, flavor), static_cast<int>(n_max));
}

AsymptoticExpansion second_moment_expansion(const MatrixLaw& law, Flavor flavor, int order,
                                            const PrimeTable& primes, SpectralData* spec_out = nullptr) {
  const auto op = build_transfer(law, 1, flavor);
  const auto seq = exact_moment_sequence(op, static_cast<int>(2 * op.size()) + 2);
  SpectralData spec = spectral_decompose(op, seq);
  auto expansion = expansion_constants(spec, order, primes);
  if (spec_out) *spec_out = std::move(spec);
  return expansion;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto law = load_law(cfg.law_path);
  const auto report = validate_law(law);
  Json result = jio::to_json(report);
  result["dim"] = law.dim();
  result["atoms"] = law.size();
  result["field"] = law.is_real() ? "real" : "complex";
  emit(cfg, std::move(result), out);
  if (cfg.require_mean_zero && !report.is_mean_zero) {
    err << "matmult: law is not mean zero\n";
    return kExitPolicy;
  }
  return kExitOk;
}

int cmd_operator(const RunConfig& cfg, std::ostream& out) {
  const auto law = load_law(cfg.law_path);
  const auto op = build_transfer(law, cfg.k, resolve_flavor(cfg, law));
  Json result = jio::to_json(op);
  Json trace = Json::array();
  for (Eigen::Index i = 0; i < op.trace_functional.size(); ++i)
    trace.push_back(jio::complex_value(op.trace_functional(i)));
  result["trace_functional"] = std::move(trace);
  emit(cfg, std::move(result), out);
  return kExitOk;
}

int cmd_recurrence(const RunConfig& cfg, std::ostream& out) {
  const auto law = load_law(cfg.law_path);
  const auto op = build_transfer(law, cfg.k, resolve_flavor(cfg, law));
  const auto cp = char_poly(op);
  const int n_max = static_cast<int>(cp.degree()) + 20;
  const auto seq = exact_moment_sequence(op, n_max);
  const auto residuals = verify_recurrence(seq, cp);
  double worst = 0.0;
  Json moments = Json::array(), res = Json::array();
  for (double a : seq.values) moments.push_back(jio::round_sig(a));
  for (double r : residuals) {
    res.push_back(jio::round_sig(r));
    worst = std::max(worst, r);
  }
  emit(cfg,
       {{"l", op.size()},
        {"char_poly", jio::to_json(cp)},
        {"moments", std::move(moments)},
        {"residuals", std::move(res)},
        {"max_residual", jio::round_sig(worst)},
        {"minimal_recurrence_length", minimal_recurrence_length(seq)}},
       out);
  return kExitOk;
}

int cmd_constants(const RunConfig& cfg, std::ostream& out) {
  const auto law = load_law(cfg.law_path);
  const PrimeTable primes(parse_count(cfg.prime_bound, "prime-bound"));
  SpectralData spec;
  const auto expansion = second_moment_expansion(law, resolve_flavor(cfg, law), cfg.N, primes, &spec);
  Json euler = Json::array();
  for (const Complex& lambda : spec.lambdas) {
    euler.push_back({{"lambda", jio::complex_value(lambda)},
                     {"P", jio::to_json(euler_P(lambda, primes))},
                     {"P_s", jio::to_json(euler_P_s(lambda, primes))},
                     {"F", jio::complex_value(euler_F(lambda, primes))}});
  }
  emit(cfg,
       {{"spectral", jio::to_json(spec)},
        {"euler", std::move(euler)},
        {"expansion", jio::to_json(expansion)}},
       out);
  return kExitOk;
}

int cmd_exact(const RunConfig& cfg, std::ostream& out) {
  const auto law = load_law(cfg.law_path);
  const std::uint64_t x = parse_count(cfg.x, "x");
  const auto table = build_sieve(x, {.with_largest_prime_factor = false});
  const Flavor flavor = resolve_flavor(cfg, law);
  const auto seq = second_moment_sequence(law, flavor, table.hist().size());
  MomentReport report;
  report.x = x;
  report.exact = exact_second_moment(table, seq);
  if (x >= 2) {
    const PrimeTable primes(parse_count(cfg.prime_bound, "prime-bound"));
    report.predicted = predict_second_moment(second_moment_expansion(law, flavor, cfg.N, primes), double(x));
  }
  Json result = jio::to_json(report);
  result.erase("mc_estimate");
  result.erase("mc_stderr");
  result.erase("trials");
  result.erase("seed");
  result["squarefree_count"] = table.squarefree_count();
  result["law_is_mean_zero"] = validate_law(law).is_mean_zero;
  emit(cfg, std::move(result), out);
  return kExitOk;
}

int cmd_mc(const RunConfig& cfg, std::ostream& out) {
  const auto law = load_law(cfg.law_path);
  const std::uint64_t x = parse_count(cfg.x, "x");
  const auto table = build_sieve(x);
  auto report = mc_moment(law, table, cfg.k, cfg.trials, cfg.seed, {.threads = cfg.threads});
  if (cfg.k == 1) {
    report.exact = exact_second_moment(table, second_moment_sequence(law, natural_flavor(law), table.hist().size()));
  }
  emit(cfg, jio::to_json(report), out);
  return kExitOk;
}

int cmd_jsr(const RunConfig& cfg, std::ostream& out) {
  const auto law = load_law(cfg.law_path);
  const auto bounds = gripenberg(law.atoms(), {.delta = cfg.delta,
                                              .max_depth = cfg.max_depth,
                                              .node_budget = parse_count(cfg.budget, "budget")});
  const auto ladder = rho_ladder(law, cfg.k);
  emit(cfg, {{"bounds", jio::to_json(bounds)}, {"ladder", jio::to_json(ladder)}}, out);
  return kExitOk;
}

int cmd_sieve_stats(const RunConfig& cfg, std::ostream& out) {
  const auto table = build_sieve(parse_count(cfg.x, "x"), {.with_largest_prime_factor = false});
  Json result = jio::sieve_stats(table);
  result["prime_count"] = table.primes().size();
  emit(cfg, std::move(result), out);
  return kExitOk;
}

int cmd_report(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto law = load_law(cfg.law_path);
  const auto grid = parse_grid(cfg.x_grid);
  const std::uint64_t mc_max_x = parse_count(cfg.mc_max_x, "mc-max-x");
  const Flavor flavor = resolve_flavor(cfg, law);
  if (cfg.trials == 1) throw InvariantError("--trials must be 0 or at least 2");

  std::optional<PrimeTable> primes;
  std::optional<AsymptoticExpansion> expansion;
  if (!grid.empty()) {
    primes.emplace(parse_count(cfg.prime_bound, "prime-bound"));
    expansion = second_moment_expansion(law, flavor, 2, *primes);
  }

  Sink sink(cfg.out, out);
  std::ostream& csv = sink.stream();
  csv << "# schema_version=" << jio::kSchemaVersion << '\n';
  const Json echo = config_echo(cfg);
  for (const auto& [key, value] : echo.items()) csv << "# " << key << '=' << value.dump() << '\n';
  csv << "x,exact,pred_N1,pred_N2,mc,mc_stderr,ratio_exact_over_pred_N2,status\n";

  bool capped = false;
  for (std::uint64_t x : grid) {
    std::string exact, pred1, pred2, mc, mc_err, ratio, status = "ok";
    try {
      const bool run_mc = cfg.trials >= 2 && x <= mc_max_x;
      const auto table = build_sieve(x, {.with_largest_prime_factor = run_mc});
      const auto seq = second_moment_sequence(law, flavor, table.hist().size());
      const double e = exact_second_moment(table, seq);
      exact = num(e);
      if (x >= 2) {
        try {
          const double p1 = predict_second_moment(truncate(*expansion, 1), double(x));
          const double p2 = predict_second_moment(*expansion, double(x));
          pred1 = num(p1);
          pred2 = num(p2);
          ratio = num(e / p2);
        } catch (const NumericalError&) {
          status = "prediction_error";
        }
      }
      if (run_mc) {
        const auto r = mc_moment(law, table, 1, cfg.trials, cfg.seed, {.threads = cfg.threads});
        mc = num(r.mc_estimate);
        mc_err = num(r.mc_stderr);
      } else if (cfg.trials >= 2 && status == "ok") {
        status = "mc_skipped";
      }
    } catch (const CapExceeded& ex) {
      status = "cap_exceeded";
      capped = true;
      err << "matmult: x=" << x << ": " << ex.what() << '\n';
    }
    csv << x << ',' << exact << ',' << pred1 << ',' << pred2 << ',' << mc << ',' << mc_err << ','
        << ratio << ',' << status << '\n';
  }
  return capped ? kExitCap : kExitOk;
}

void add_law(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--law", cfg.law_path, "Law file (JSON)")->required();
}

void add_flavor(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--flavor", cfg.flavor, "Lift flavour; defaults to real for real laws")
      ->check(CLI::IsMember({"real", "complex"}));
}

void add_primes(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--N", cfg.N, "Expansion order")->check(CLI::Range(1, 2))->capture_default_str();
  sub->add_option("--prime-bound", cfg.prime_bound, "Euler product prime bound")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Moments of random matrix-valued multiplicative functions", "matmult"};
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "Check a law and report its mean and second moment");
  add_law(validate, cfg);
  validate->add_flag("--require-mean-zero", cfg.require_mean_zero, "Exit 2 unless E[X] = 0");

  auto* op = app.add_subcommand("operator", "Lifted transfer operator on Sym^k");
  add_law(op, cfg);
  op->add_option("--k", cfg.k, "Lift order")->check(CLI::PositiveNumber)->capture_default_str();
  add_flavor(op, cfg);

  auto* rec = app.add_subcommand("recurrence", "Characteristic polynomial and recurrence residuals");
  add_law(rec, cfg);
  rec->add_option("--k", cfg.k, "Lift order")->check(CLI::PositiveNumber)->capture_default_str();
  add_flavor(rec, cfg);

  auto* constants = app.add_subcommand("constants", "Spectral data and expansion constants");
  add_law(constants, cfg);
  add_primes(constants, cfg);
  add_flavor(constants, cfg);

  auto* exact = app.add_subcommand("exact", "Exact second moment and its prediction at x");
  add_law(exact, cfg);
  exact->add_option("--x", cfg.x, "Sum length")->capture_default_str();
  add_primes(exact, cfg);
  add_flavor(exact, cfg);

  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate of the 2k-th moment at x");
  add_law(mc, cfg);
  mc->add_option("--x", cfg.x, "Sum length")->capture_default_str();
  mc->add_option("--k", cfg.k, "Moment order 2k")->check(CLI::PositiveNumber)->capture_default_str();
  mc->add_option("--trials", cfg.trials, "Monte Carlo trials")->capture_default_str();
  mc->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();

  auto* jsr = app.add_subcommand("jsr", "Joint spectral radius bracket and radius ladder");
  add_law(jsr, cfg);
  cfg.k = 1;
  jsr->add_option("--k", cfg.k, "Ladder length: rho_2 .. rho_2k")->check(CLI::PositiveNumber);
  jsr->add_option("--delta", cfg.delta, "Pruning slack")->check(CLI::PositiveNumber)->capture_default_str();
  jsr->add_option("--max-depth", cfg.max_depth, "Maximum product length")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  jsr->add_option("--budget", cfg.budget, "Node budget")->capture_default_str();

  auto* sieve = app.add_subcommand("sieve-stats", "Squarefree histogram by number of prime factors");
  sieve->add_option("--x", cfg.x, "Sieve bound")->capture_default_str();

  auto* report = app.add_subcommand("report", "CSV of exact, predicted and Monte Carlo moments over a grid");
  add_law(report, cfg);
  report->add_option("--x-grid", cfg.x_grid, "Grid a:b:mult")->capture_default_str();
  report->add_option("--trials", cfg.trials, "Monte Carlo trials per row (0 disables)")->capture_default_str();
  report->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  report->add_option("--mc-max-x", cfg.mc_max_x, "Largest x with a Monte Carlo column")->capture_default_str();
  report->add_option("--prime-bound", cfg.prime_bound, "Euler product prime bound")->capture_default_str();
  add_flavor(report, cfg);

  for (CLI::App* sub : app.get_subcommands({})) {
    sub->add_option("--out", cfg.out, "Write the artifact here instead of stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.threads = threads_from_env();
    if (cfg.command == "validate") return cmd_validate(cfg, out, err);
    if (cfg.command == "operator") return cmd_operator(cfg, out);
    if (cfg.command == "recurrence") return cmd_recurrence(cfg, out);
    if (cfg.command == "constants") return cmd_constants(cfg, out);
    if (cfg.command == "exact") return cmd_exact(cfg, out);
    if (cfg.command == "mc") return cmd_mc(cfg, out);
    if (cfg.command == "jsr") return cmd_jsr(cfg, out);
    if (cfg.command == "sieve-stats") return cmd_sieve_stats(cfg, out);
    if (cfg.command == "report") return cmd_report(cfg, out, err);
  } catch (const CapExceeded& e) {
    err << "matmult: resource cap: " << e.what() << '\n';
    return kExitCap;
  } catch (const std::bad_alloc&) {
    err << "matmult: out of memory\n";
    return kExitCap;
  } catch (const NumericalError& e) {
    err << "matmult: numerical failure: " << e.what() << '\n';
    return kExitPolicy;
  } catch (const Error& e) {
    err << "matmult: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace matmult::cli
