#include "quadham/cli.hpp"

#include "quadham/dynamics.hpp"
#include "quadham/verify.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace quadham {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::uint64_t default_seed() {
  const char* env = std::getenv("QUADHAM_SEED");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || env[0] == '-') throw UsageError(std::string("QUADHAM_SEED is not an unsigned integer: ") + env);
  return v;
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw UsageError("invalid number for " + what + ": '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

// "alpha=1,beta=2" entries, possibly spread over repeated flags.
Params parse_params(const std::vector<std::string>& items) {
  Params p;
  for (const auto& item : items)
    for (const auto& kv : split(item, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw UsageError("parameter must be name=value: '" + kv + "'");
      const std::string key = kv.substr(0, eq);
      p[key] = parse_double(kv.substr(eq + 1), key);
    }
  return p;
}

Vec parse_state(const std::string& text, const SystemDescriptor& d) {
  if (text.empty()) return d.default_state;
  const auto parts = split(text, ',');
  if (static_cast<int>(parts.size()) != d.chart.dim())
    throw UsageError("--x0 needs " + std::to_string(d.chart.dim()) + " comma-separated values for " + d.name +
                     ", got " + std::to_string(parts.size()));
  Vec v(d.chart.dim());
  for (int i = 0; i < d.chart.dim(); ++i) v[i] = parse_double(parts[i], "--x0");
  return v;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

struct Common {
  std::string system;
  std::vector<std::string> params;
  std::uint64_t seed = 0;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("system", c.system, "registered system name")->required();
  cmd->add_option("--param,-p", c.params, "parameter override name=value (repeatable, comma-separated)");
  cmd->add_option("--seed", c.seed, "random seed (default: QUADHAM_SEED or 0)");
  cmd->add_option("--out,-o", c.out, "output file (default: stdout)");
}

// --- verify -----------------------------------------------------------------

struct VerifyArgs {
  Common common;
  std::size_t samples = 200;
  double tol = 1.0;
  bool deterministic = false;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  if (a.samples < 1) throw UsageError("--samples must be at least 1");
  if (!(a.tol > 0.0)) throw UsageError("--tol must be positive");
  VerifyConfig cfg;
  cfg.samples = a.samples;
  cfg.seed = a.common.seed;
  cfg.params = parse_params(a.common.params);
  cfg.tol_scale = a.tol;
  const VerificationReport r = verify_system(a.common.system, cfg);
  emit(a.common.out, to_json(r, a.deterministic).dump(2) + "\n", out);
  err << r.system << ": " << r.count(ClaimStatus::pass) << " pass, " << r.count(ClaimStatus::fail) << " fail, "
      << r.count(ClaimStatus::mismatch_reported) << " mismatch-reported\n";
  for (const auto& c : r.claims)
    if (c.status == ClaimStatus::fail) err << "  FAIL " << c.id << " residual " << c.residual << " > " << c.tolerance
                                           << (c.note.empty() ? "" : " (" + c.note + ")") << "\n";
  return r.hard_failure() ? kExitFailure : kExitOk;
}

// --- integrate --------------------------------------------------------------

struct IntegrateArgs {
  Common common;
  std::string x0;
  double t0 = 0.0;
  double t1 = 10.0;
  double dt = 1e-3;
  double rtol = 1e-10;
  double atol = 1e-12;
  std::string method = "rk4";
  std::string format = "csv";
  std::size_t record_every = 1;
};

int cmd_integrate(const IntegrateArgs& a, std::ostream& out, std::ostream& err) {
  const SystemDescriptor& d = find_system(a.common.system);
  const Params params = resolve_params(d, parse_params(a.common.params));
  check_constraints(d, params);
  const SystemModel m = d.build(params);
  const State s0(parse_state(a.x0, d), a.t0);
  if (a.format != "csv" && a.format != "json") throw UsageError("--format must be csv or json");
  if (!(a.dt > 0.0)) throw UsageError("--dt must be positive");
  if (a.t1 < a.t0) throw UsageError("--t1 must not precede --t0");

  IntegratorConfig cfg;
  try {
    cfg.method = parse_method(a.method);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  cfg.dt = a.dt;
  cfg.rtol = a.rtol;
  cfg.atol = a.atol;
  cfg.t_end = a.t1;
  cfg.record_every = a.record_every;
  std::vector<ScalarField> integrals;
  for (const auto& f : m.integrals) integrals.push_back(f.field);
  for (const auto& f : m.candidate_integrals) integrals.push_back(f.field);
  for (std::size_t k = 0; k < integrals.size(); ++k)
    integrals[k].name = k < m.integrals.size() ? m.integrals[k].name : m.candidate_integrals[k - m.integrals.size()].name;

  const Trajectory tr = integrate(m.field, s0, cfg, integrals);
  nlohmann::json summary;
  summary["system"] = d.name;
  summary["params"] = params;
  summary["method"] = method_name(cfg.method);
  summary["t0"] = a.t0;
  summary["t1"] = a.t1;
  summary["steps"] = tr.steps;
  summary["rejected"] = tr.rejected;
  summary["rows"] = tr.samples.size();
  summary["aborted"] = tr.aborted;
  if (tr.aborted) summary["abort_reason"] = tr.abort_reason;
  summary["drift"] = nlohmann::json::array();
  for (const auto& e : drift_report(tr, integrals))
    summary["drift"].push_back({{"integral", e.name}, {"drift", e.drift}, {"domain_exit", e.domain_exit},
                                {"samples_used", e.samples_used}});

  if (a.format == "csv") {
    std::ostringstream csv;
    write_csv(csv, tr, d.chart.labels());
    emit(a.common.out, csv.str(), out);
    // The drift summary goes to stdout only when the trajectory went to a file.
    if (!a.common.out.empty() && a.common.out != "-") out << summary.dump(2) << "\n";
    else err << summary.dump() << "\n";
  } else {
    nlohmann::json j = summary;
    j["labels"] = d.chart.labels();
    j["samples"] = nlohmann::json::array();
    for (std::size_t i = 0; i < tr.samples.size(); ++i) {
      nlohmann::json row;
      row["t"] = tr.samples[i].t;
      row["x"] = std::vector<double>(tr.samples[i].coords.data(), tr.samples[i].coords.data() + tr.samples[i].dim());
      nlohmann::json vals = nlohmann::json::array();
      for (const auto& series : tr.integral_series) vals.push_back(series[i]);
      row["integrals"] = vals;
      j["samples"].push_back(row);
    }
    emit(a.common.out, j.dump(2) + "\n", out);
  }
  if (tr.aborted) {
    err << "integration stopped early: " << tr.abort_reason << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

// --- lyapunov ---------------------------------------------------------------

struct LyapunovArgs {
  Common common;
  std::string x0;
  double T = 0.0;
  double dt = 0.01;
  double renorm = 1.0;
};

int cmd_lyapunov(const LyapunovArgs& a, bool T_given, std::ostream& out, std::ostream&) {
  const SystemDescriptor& d = find_system(a.common.system);
  const Params params = resolve_params(d, parse_params(a.common.params));
  check_constraints(d, params);
  const SystemModel m = d.build(params);
  LyapunovConfig cfg;
  if (T_given) cfg.T = a.T;
  if (!(cfg.T > 0.0) || !(a.dt > 0.0) || !(a.renorm > 0.0)) throw UsageError("--T, --dt and --renorm must be positive");
  cfg.dt = a.dt;
  cfg.renorm = a.renorm;
  cfg.seed = a.common.seed;
  const LyapunovResult r = lyapunov_spectrum(m.field, State(parse_state(a.x0, d)), cfg);
  nlohmann::json j;
  j["system"] = d.name;
  j["params"] = params;
  j["exponents"] = r.exponents;
  j["std_errors"] = r.std_errors;
  j["T"] = r.T;
  j["dt"] = cfg.dt;
  j["renorm"] = r.renorm;
  j["seed"] = r.seed;
  j["mean_divergence"] = r.mean_divergence;
  if (!T_given) j["note"] = "--T not given; default T = 1000 applied";
  emit(a.common.out, j.dump(2) + "\n", out);
  return kExitOk;
}

// --- report -----------------------------------------------------------------

int cmd_report(const std::vector<std::string>& paths, const std::string& out_path, std::ostream& out) {
  if (paths.empty()) throw UsageError("report needs at least one input report");
  std::vector<nlohmann::json> reports;
  for (const auto& p : paths) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw UsageError("cannot read '" + p + "'");
    try {
      reports.push_back(nlohmann::json::parse(f));
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("'" + p + "' is not valid JSON: " + e.what());
    }
  }
  emit(out_path, merge_reports(reports).dump(2) + "\n", out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verify multi-Hamiltonian structures of 3D and 4D dynamical systems", "quadham"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run the claim suite of a system");
  add_common(verify, va.common);
  verify->add_option("--samples", va.samples, "number of random states")->capture_default_str();
  verify->add_option("--tol", va.tol, "factor applied to every tolerance")->capture_default_str();
  verify->add_flag("--deterministic", va.deterministic, "omit the timestamp");

  IntegrateArgs ia;
  auto* integ = app.add_subcommand("integrate", "integrate a trajectory and report integral drift");
  add_common(integ, ia.common);
  integ->add_option("--x0", ia.x0, "initial state, comma-separated (default: system default)");
  integ->add_option("--t0", ia.t0, "start time")->capture_default_str();
  integ->add_option("--t1", ia.t1, "end time")->capture_default_str();
  integ->add_option("--dt", ia.dt, "step (initial step for dp45)")->capture_default_str();
  integ->add_option("--rtol", ia.rtol, "dp45 relative tolerance")->capture_default_str();
  integ->add_option("--atol", ia.atol, "dp45 absolute tolerance")->capture_default_str();
  integ->add_option("--method", ia.method, "rk4, dp45 or euler")->capture_default_str();
  integ->add_option("--format", ia.format, "csv or json")->capture_default_str();
  integ->add_option("--record-every", ia.record_every, "keep every n-th step")->capture_default_str();

  LyapunovArgs la;
  auto* lyap = app.add_subcommand("lyapunov", "estimate the Lyapunov spectrum");
  add_common(lyap, la.common);
  lyap->add_option("--x0", la.x0, "initial state, comma-separated (default: system default)");
  auto* t_opt = lyap->add_option("--T", la.T, "horizon (default 1000)");
  lyap->add_option("--dt", la.dt, "RK4 step")->capture_default_str();
  lyap->add_option("--renorm", la.renorm, "time between QR renormalizations")->capture_default_str();

  std::vector<std::string> report_paths;
  std::string report_out;
  auto* report = app.add_subcommand("report", "merge verification reports");
  report->add_option("reports", report_paths, "report files");
  report->add_option("--out,-o", report_out, "output file (default: stdout)");

  try {
    const std::uint64_t seed = default_seed();
    va.common.seed = ia.common.seed = la.common.seed = seed;
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(va, out, err);
    if (integ->parsed()) return cmd_integrate(ia, out, err);
    if (lyap->parsed()) return cmd_lyapunov(la, t_opt->count() > 0, out, err);
    if (report->parsed()) return cmd_report(report_paths, report_out, out);
  } catch (const UnknownSystemError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConstraintError& e) {
    err << "constraint violated: " << e.what() << "\n";
    return kExitConstraint;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    // Unknown parameter names and similar input problems.
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace quadham
