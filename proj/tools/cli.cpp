#include "cli.hpp"

#include "curvfun/analysis.hpp"
#include "curvfun/body_io.hpp"
#include "curvfun/randpoly.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

namespace curvfun::cli {
namespace {

using Record = nlohmann::ordered_json;

enum class Format { json, csv, pretty };

struct UsageError : Error {
  using Error::Error;
};

struct RunConfig {
  std::string body_file;
  std::string corpus_dir;
  std::string out_dir;
  int m = 0;
  double k = 0.0;
  std::string i_spec;
  std::string p_spec = "1";
  std::string p_grid;
  std::string rule_spec;
  std::string generator = "kl";
  std::string claim;
  double r = 0.0, s = 0.0, t = 0.0, k_top = 0.0;
  std::vector<std::size_t> N;
  std::size_t trials = 0;
  std::optional<std::uint64_t> seed;
  bool dim3_ok = false;
  bool mc = false;
  bool json = false, csv = false, pretty = false;
  Tolerances tol;

  Format format() const { return csv ? Format::csv : (pretty ? Format::pretty : Format::json); }
};

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

std::string num17(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Record p_value(double p) { return std::isinf(p) ? Record("inf") : Record(p); }

double parse_p(const std::string& spec) {
  if (spec == "inf" || spec == "infinity" || spec == "+inf") return kPInfinity;
  try {
    std::size_t used = 0;
    const double p = std::stod(spec, &used);
    if (used != spec.size() || !std::isfinite(p)) throw std::invalid_argument(spec);
    return p;
  } catch (const std::logic_error&) {
    throw UsageError("cannot parse p value '" + spec + "'");
  }
}

std::vector<int> parse_i(const std::string& spec, int dim) {
  std::vector<int> out;
  if (spec.empty()) return std::vector<int>(static_cast<std::size_t>(dim - 1), 0);
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError("cannot parse index entry '" + item + "' in --i");
    }
  }
  return out;
}

std::vector<double> parse_grid(const std::string& spec, int dim) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3 && !(parts.size() == 4 && parts[3] == "log")) {
    throw UsageError("p grid must be a:b:steps or a:b:steps:log, got '" + spec + "'");
  }
  const double a = parse_p(parts[0]);
  const double b = parse_p(parts[1]);
  int steps = 0;
  try {
    steps = std::stoi(parts[2]);
  } catch (const std::logic_error&) {
    throw UsageError("cannot parse grid steps '" + parts[2] + "'");
  }
  if (steps < 2 || std::isinf(a) || std::isinf(b)) throw UsageError("p grid needs finite ends and at least 2 steps");
  const bool log = parts.size() == 4;
  if (log && !(a > 0 && b > 0)) throw UsageError("log p grid needs positive ends");
  std::vector<double> out;
  for (int j = 0; j < steps; ++j) {
    const double w = static_cast<double>(j) / (steps - 1);
    const double p = log ? a * std::pow(b / a, w) : a + w * (b - a);
    check_p(dim, p);
    out.push_back(p);
  }
  return out;
}

SphereRule rule_for(const RunConfig& cfg, int dim) {
  return cfg.rule_spec.empty() ? default_rule(dim) : parse_rule(cfg.rule_spec, dim);
}

SupportBody need_body(const RunConfig& cfg) {
  if (cfg.body_file.empty()) throw UsageError("--body is required");
  return load_body_file(cfg.body_file);
}

WeightIndex index_for(const RunConfig& cfg, int dim) { return WeightIndex(dim, cfg.m, cfg.k, parse_i(cfg.i_spec, dim)); }

void emit(const std::vector<Record>& records, Format fmt, std::ostream& out) {
  if (fmt == Format::json) {
    for (const auto& r : records) out << r.dump() << '\n';
    return;
  }
  auto cell = [fmt](const Record& v) {
    std::string text = v.is_string() ? v.get<std::string>() : (v.is_number_float() ? num17(v.get<double>()) : v.dump());
    if (fmt == Format::csv && text.find_first_of(",\"") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : text) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
      return quoted + "\"";
    }
    return text;
  };
  if (fmt == Format::csv) {
    bool header = false;
    for (const auto& r : records) {
      if (!header) {
        std::string sep;
        for (const auto& [key, v] : r.items()) out << sep << key, sep = ",";
        out << '\n';
        header = true;
      }
      std::string sep;
      for (const auto& [key, v] : r.items()) out << sep << cell(v), sep = ",";
      out << '\n';
    }
    return;
  }
  for (const auto& r : records) {
    for (const auto& [key, v] : r.items()) out << "  " << key << ": " << cell(v) << '\n';
    out << '\n';
  }
}

Record value_record(const FunctionalValue& v) {
  Record r;
  r["body"] = v.body_id;
  r["index"] = v.index.describe();
  r["p"] = p_value(v.p);
  r["rule"] = v.rule;
  r["value"] = v.value;
  return r;
}

Record report_record(const VerificationReport& rep) {
  Record r;
  const nlohmann::json j = to_json(rep);
  for (const char* key : {"claim", "body", "index", "verdict", "lhs", "rhs", "slack", "equality_case"}) r[key] = j[key];
  for (const char* key : {"params", "extra", "series", "note"})
    if (j.contains(key)) r[key] = j[key];
  return r;
}

int verdict_code(const std::vector<VerificationReport>& reps) {
  for (const auto& r : reps)
    if (r.verdict == Verdict::violated) return 1;
  return 0;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  const SupportBody body = need_body(cfg);
  const int n = body.dim();
  const double p = parse_p(cfg.p_spec);
  check_p(n, p);
  const WeightIndex index = index_for(cfg, n);
  const CurvatureField field(body, rule_for(cfg, n));
  emit({value_record(weighted_asa(field, index, p))}, cfg.format(), out);
  return 0;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const SupportBody body = need_body(cfg);
  const int n = body.dim();
  if (cfg.p_grid.empty()) throw UsageError("--p-grid is required");
  const auto grid = parse_grid(cfg.p_grid, n);
  const WeightIndex index = index_for(cfg, n);
  const CurvatureField field(body, rule_for(cfg, n));
  std::vector<Record> records;
  for (double p : grid) records.push_back(value_record(weighted_asa(field, index, p)));
  emit(records, cfg.format(), out);
  return 0;
}

int cmd_divergence(const RunConfig& cfg, std::ostream& out) {
  const SupportBody body = need_body(cfg);
  const int n = body.dim();
  const WeightIndex index = index_for(cfg, n);
  const CurvatureField field(body, rule_for(cfg, n));
  const std::string& g = cfg.generator;
  Record r;
  r["body"] = body.id();
  r["index"] = index.describe();
  r["rule"] = field.rule().describe();
  r["divergence"] = g;
  auto arg = [&](const std::string& head) {
    try {
      return std::stod(g.substr(head.size() + 1));
    } catch (const std::logic_error&) {
      throw UsageError("malformed divergence '" + g + "'");
    }
  };
  bool jensen = false;
  if (g == "kl") {
    r["value"] = kl_divergence(field, index, Direction::p_to_q);
  } else if (g == "kl-rev") {
    r["value"] = kl_divergence(field, index, Direction::q_to_p);
  } else if (g == "kl-normalized") {
    r["value"] = normalized_kl_divergence(field, index);
  } else if (g.rfind("hellinger:", 0) == 0) {
    r["value"] = hellinger(field, index, arg("hellinger"));
  } else if (g.rfind("renyi:", 0) == 0) {
    r["value"] = renyi(field, index, arg("renyi"));
  } else {
    DivergenceGenerator gen;
    try {
      gen = parse_generator(g);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    r["value"] = f_divergence(field, index, gen);
    const JensenReport jr = jensen_bound(field, index, gen);
    r["shape"] = to_string(gen.shape);
    r["jensen_rhs"] = jr.rhs;
    r["jensen_rhs_stated"] = jr.rhs_stated;
    r["jensen_holds"] = jr.holds;
    r["jensen_equality"] = jr.equality;
    jensen = !jr.holds;
  }
  emit({r}, cfg.format(), out);
  return jensen ? 1 : 0;
}

std::vector<Record> mc_records(const SupportBody& body, const WeightIndex& index, double p, const RunConfig& cfg,
                               bool& ok, double tol) {
  const BoundaryDensity density(body, index, p, rule_for(cfg, body.dim()));
  std::vector<Record> rows;
  const double c = random_polytope_constant(body.dim());
  const double omega = weighted_asa(density.body(), index, p, density.rule()).value;
  const double target = c * std::pow(density.normalizer(), 2.0 / (body.dim() - 1)) * omega;
  std::optional<InterpretationReport> rep;
  std::vector<DeficitEstimate> estimates;
  if (cfg.N.size() >= 3) {
    rep = interpretation_check(density, cfg.N, cfg.trials, *cfg.seed);
    estimates = rep->estimates;
  } else {
    for (std::size_t N : cfg.N) estimates.push_back(expected_deficit(density, N, cfg.trials, *cfg.seed));
  }
  for (const auto& e : estimates) {
    Record r;
    r["N"] = std::to_string(e.N);
    r["mean_deficit"] = e.mean;
    r["stderr"] = e.stderr_;
    r["scaled"] = e.scaled;
    r["target"] = target;
    r["ratio"] = e.scaled / target;
    rows.push_back(r);
  }
  ok = true;
  if (rep) {
    Record r;
    r["N"] = "inf";
    r["mean_deficit"] = 0.0;
    r["stderr"] = 0.0;
    r["scaled"] = rep->extrapolated;
    r["target"] = target;
    r["ratio"] = rep->ratio;
    rows.push_back(r);
    ok = rep->relative_error <= tol;
  }
  return rows;
}

void check_mc_flags(const RunConfig& cfg) {
  if (!cfg.seed) throw UsageError("--seed is required for mc-polytope");
  if (cfg.N.empty()) throw UsageError("--N is required for mc-polytope");
  if (cfg.trials < 2) throw UsageError("--trials must be at least 2");
}

int cmd_mc(const RunConfig& cfg, std::ostream& out) {
  check_mc_flags(cfg);
  const SupportBody body = need_body(cfg);
  const int n = body.dim();
  if (n == 3 && !cfg.dim3_ok) throw UsageError("n = 3 Monte Carlo is informational only; pass --dim-3-ok to run it");
  const double p = parse_p(cfg.p_spec);
  check_p(n, p);
  bool ok = true;
  const auto rows = mc_records(body, index_for(cfg, n), p, cfg, ok, cfg.tol.monte_carlo);
  emit(rows, cfg.json ? Format::json : (cfg.pretty ? Format::pretty : Format::csv), out);
  return 0;
}

std::vector<double> grid_or_default(const RunConfig& cfg, int n) {
  return cfg.p_grid.empty() ? monotone_grid() : parse_grid(cfg.p_grid, n);
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const std::string& claim = cfg.claim;
  if (claim == "all") {
    if (cfg.corpus_dir.empty()) throw UsageError("verify all needs --corpus DIR");
    const auto corpus = load_corpus(cfg.corpus_dir);
    if (corpus.empty()) throw UsageError("corpus directory '" + cfg.corpus_dir + "' has no body files");
    SuiteOptions opt;
    opt.tol = cfg.tol;
    const auto reps = run_suite(corpus, opt);
    std::vector<Record> records;
    for (const auto& r : reps) records.push_back(report_record(r));
    int code = verdict_code(reps);
    if (cfg.mc) {
      RunConfig mc = cfg;
      mc.N = {1000, 2000, 4000};
      if (mc.trials == 0) mc.trials = 10000;
      if (!mc.seed) mc.seed = 20240601;
      for (const auto& b : corpus) {
        if (b.dim() != 2 || (b.id() != "ball2" && b.id() != "ellipse_2_1")) continue;
        bool ok = true;
        const auto rows = mc_records(b, WeightIndex::zero(2), 1.0, mc, ok, cfg.tol.monte_carlo);
        Record r;
        r["claim"] = "mc-polytope";
        r["body"] = b.id();
        r["index"] = WeightIndex::zero(2).describe();
        r["verdict"] = ok ? "holds" : "violated";
        r["lhs"] = rows.back()["scaled"];
        r["rhs"] = rows.back()["target"];
        r["slack"] = rows.back()["ratio"].get<double>() - 1.0;
        r["equality_case"] = "none";
        records.push_back(r);
        if (!ok) code = 1;
      }
    }
    emit(records, cfg.format(), out);
    return code;
  }

  const SupportBody body = need_body(cfg);
  const int n = body.dim();
  const WeightIndex index = index_for(cfg, n);
  const SphereRule rule = rule_for(cfg, n);
  const CurvatureField field(body, rule);
  std::vector<VerificationReport> reps;
  if (claim == "holder3") {
    reps.push_back(verify_holder_three(field, index, cfg.r, cfg.s, cfg.t, cfg.tol));
  } else if (claim == "holdervol") {
    reps.push_back(verify_holder_volume(field, index, cfg.r, cfg.t, cfg.tol));
  } else if (claim == "kinterp") {
    reps.push_back(
        verify_k_interpolation(field, cfg.m, parse_i(cfg.i_spec, n), parse_p(cfg.p_spec), cfg.r, cfg.s, cfg.k_top, cfg.tol));
  } else if (claim == "monotone") {
    reps.push_back(monotonicity_scan(field, index, grid_or_default(cfg, n), cfg.tol));
  } else if (claim == "petty") {
    const PettyStats ps = petty_ratio_stats(field, cfg.tol);
    VerificationReport r;
    r.claim = "petty";
    r.body_id = body.id();
    r.index = index.describe();
    r.lhs = ps.min;
    r.rhs = ps.max;
    r.slack = ps.spread;
    r.verdict = Verdict::holds;
    r.equality_case = ps.ellipsoid ? "ellipsoid" : "none";
    reps.push_back(r);
  } else if (claim == "limit-inf") {
    reps.push_back(limit_p_infinity(field, index, {10, 30, 100, 300, 1000}, cfg.tol));
  } else if (claim == "limit-zero") {
    reps.push_back(limit_p_zero(body, index, rule, {0.3, 0.1, 0.03, 0.01}, cfg.tol));
  } else {
    throw UsageError("unknown claim '" + claim + "'");
  }
  std::vector<Record> records;
  for (const auto& r : reps) records.push_back(report_record(r));
  emit(records, cfg.format(), out);
  return verdict_code(reps);
}

int cmd_corpus(const RunConfig& cfg, std::ostream& out) {
  if (cfg.out_dir.empty()) throw UsageError("--out is required");
  const auto paths = write_corpus(cfg.out_dir);
  for (const auto& p : paths) {
    const SupportBody b = load_body_file(p);
    const ValidityReport v = validate_body(b, default_rule(b.dim()));
    if (!v.ok) throw Error("generated body '" + b.id() + "' fails the validity gate");
    out << p.string() << '\n';
  }
  return 0;
}

void apply_thread_cap() {
  if (const char* env = std::getenv("CURVFUN_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) omp_set_num_threads(t);
  }
}

void add_index_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--m", cfg.m, "index m");
  sub->add_option("--k", cfg.k, "index k");
  sub->add_option("--i", cfg.i_spec, "index entries i_1,...,i_{n-1} (empty: all zero)");
  sub->add_option("--rule", cfg.rule_spec, "quadrature rule, e.g. 512 or 64x128");
}

void add_format_flags(CLI::App* sub, RunConfig& cfg) {
  auto* j = sub->add_flag("--json", cfg.json, "JSON lines (default)");
  auto* c = sub->add_flag("--csv", cfg.csv, "CSV table");
  auto* p = sub->add_flag("--pretty", cfg.pretty, "human-readable");
  j->excludes(c)->excludes(p);
  c->excludes(p);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Weighted affine surface areas of smooth convex bodies"};
  app.require_subcommand(1);

  auto* eval = app.add_subcommand("eval", "evaluate one weighted affine surface area");
  auto* sweep = app.add_subcommand("sweep", "evaluate along a p grid");
  auto* div = app.add_subcommand("divergence", "divergences of the cone measures");
  auto* verify = app.add_subcommand("verify", "check an inequality or limit");
  auto* mc = app.add_subcommand("mc-polytope", "random polytope Monte Carlo");
  auto* corpus = app.add_subcommand("corpus-gen", "write the canonical body corpus");

  for (auto* sub : {eval, sweep, div, verify, mc}) {
    sub->add_option("--body", cfg.body_file, "body file (JSON)");
    add_index_options(sub, cfg);
    add_format_flags(sub, cfg);
    sub->add_option("--tol-equality", cfg.tol.equality, "relative tolerance for equality verdicts");
    sub->add_option("--tol-limit", cfg.tol.limit, "relative tolerance for extrapolated limits");
    sub->add_option("--tol-mc", cfg.tol.monte_carlo, "relative tolerance for Monte Carlo limits");
  }
  for (auto* sub : {eval, div, verify, mc}) sub->add_option("--p", cfg.p_spec, "exponent p (number or inf)");
  sweep->add_option("--p-grid", cfg.p_grid, "a:b:steps[:log]")->required();
  div->add_option("--gen", cfg.generator,
                  "kl | kl-rev | kl-normalized | hellinger:A | renyi:A | power:A | sqrt | neglog | linear:A,B");
  verify->add_option("claim", cfg.claim, "holder3 | holdervol | kinterp | monotone | petty | limit-inf | limit-zero | all")
      ->required();
  verify->add_option("--r", cfg.r);
  verify->add_option("--s", cfg.s);
  verify->add_option("--t", cfg.t);
  verify->add_option("--k-top", cfg.k_top, "upper k of the kinterp triple (r < s < k-top)");
  verify->add_option("--p-grid", cfg.p_grid, "grid for monotone");
  verify->add_option("--corpus", cfg.corpus_dir, "corpus directory for 'all'");
  verify->add_flag("--mc", cfg.mc, "include the n = 2 random polytope checks in 'all'");
  verify->add_option("--trials", cfg.trials, "Monte Carlo trials for --mc");
  mc->add_option("--N", cfg.N, "sample sizes")->delimiter(',');
  mc->add_option("--trials", cfg.trials, "trials per N");
  mc->add_option("--seed", cfg.seed, "RNG seed");
  mc->add_flag("--dim-3-ok", cfg.dim3_ok, "allow the (informational) n = 3 run");
  corpus->add_option("--out", cfg.out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return 2;
  }

  apply_thread_cap();
  try {
    if (*eval) return cmd_eval(cfg, out);
    if (*sweep) return cmd_sweep(cfg, out);
    if (*div) return cmd_divergence(cfg, out);
    if (*verify) return cmd_verify(cfg, out);
    if (*mc) return cmd_mc(cfg, out);
    if (*corpus) return cmd_corpus(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return 2;
  }
  return 2;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"curvfun"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace curvfun::cli
