#include "boltzscat/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "boltzscat/parallel.hpp"
#include "boltzscat/special.hpp"
#include "json_io.hpp"

namespace bz {

namespace fs = std::filesystem;

namespace {

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json labelled(const Vec& v, int D) {
  const auto labels = invariant_labels(D);
  json o = json::object();
  for (std::size_t k = 0; k < v.size(); ++k) o[labels[k]] = v[k];
  return o;
}

class Summary {
 public:
  explicit Summary(bool strict) : strict_(strict) {}

  void check(const std::string& name, bool ok, double value, double limit, const std::string& relation = "<=") {
    assertions_.push_back(
        {{"name", name}, {"ok", ok}, {"value", number_or_inf(value)}, {"limit", number_or_inf(limit)}, {"relation", relation}});
    failed_ = failed_ || !ok;
  }
  void check(const std::string& name, bool ok) {
    assertions_.push_back({{"name", name}, {"ok", ok}});
    failed_ = failed_ || !ok;
  }
  void warn(const std::string& w) {
    warnings_.push_back(w);
    if (strict_) failed_ = true;
  }
  json& results() { return results_; }
  void file(const std::string& f) { files_.push_back(f); }
  bool failed() const { return failed_; }

  json finish(const RunConfig& c, std::uint64_t seed, const std::string& status) const {
    json s;
    s["version"] = kVersion;
    s["command"] = command_name(c.command);
    json cfg;
    try {
      cfg = json::parse(c.source);
    } catch (const json::exception&) {
      cfg = c.source;
    }
    s["config"] = cfg;
    s["resolved_config"] = json::parse(resolved_config_json(c));
    s["seed"] = seed;
    s["strict"] = strict_;
    s["status"] = status;
    s["partial"] = status == "error";
    s["assertions"] = assertions_;
    s["warnings"] = warnings_;
    s["results"] = results_;
    s["files"] = files_;
    return s;
  }

 private:
  bool strict_;
  bool failed_ = false;
  json assertions_ = json::array();
  json warnings_ = json::array();
  json results_ = json::object();
  json files_ = json::array();
};

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot write " + p.string());
  out << text;
  require(static_cast<bool>(out), ErrorKind::Io, "write failed for " + p.string());
}

struct Context {
  const RunConfig& c;
  const RunOptions& o;
  fs::path out;
  std::uint64_t seed;
  Summary& s;
};

void dump_field(Context& x, const DistributionField& f, const std::string& name) {
  fs::create_directories(x.out / "fields");
  write_field(f, (x.out / "fields" / (name + ".bin")).string(), (x.out / "fields" / (name + ".json")).string());
  x.s.file("fields/" + name + ".json");
  x.s.file("fields/" + name + ".bin");
}

void write_iteration_log(Context& x, const PicardLog& log, const std::string& name) {
  std::ostringstream os;
  os << "k,delta,ratio\n";
  for (std::size_t k = 0; k < log.deltas.size(); ++k)
    os << k + 1 << ',' << fmt(log.deltas[k]) << ',' << (k ? fmt(log.ratios[k - 1]) : std::string("")) << '\n';
  write_text(x.out / name, os.str());
  x.s.file(name);
}

json log_json(const PicardLog& log) {
  return json{{"iterations", log.iterations}, {"converged", log.converged}, {"residual", log.residual},
              {"max_ratio", log.max_ratio()}, {"deltas", log.deltas}};
}

// Data field h = F / M(0) on the grid, tagged with time t (comoving).
DistributionField make_data(const Context& x, double t) {
  const DataSpec& d = x.c.data;
  const PhaseGrid& g = x.c.grid;
  DistributionField f;
  if (d.kind == "field") {
    f = read_field(d.path);
    require(f.grid == g, ErrorKind::InvalidArgument, "data.path: field grid differs from the configured grid");
    require(f.frame == Frame::Comoving, ErrorKind::InvalidArgument, "data.path: field must be comoving");
    const GlobalMaxwellian a(f.ref), b(x.c.params);
    require(f.ref.D == x.c.params.D && (a.invariants() == b.invariants()), ErrorKind::InvalidArgument,
            "data.path: field reference differs from the configured Maxwellian");
    f.t = t;
    return f;
  }
  if (d.kind == "perturbed") {
    Perturbation p = d.perturbation;
    if (x.o.seed) p.seed = *x.o.seed;
    f = perturbed_field(g, x.c.params, p);
    f.t = t;
    return f;
  }
  f = reference_field(g, x.c.params, t, Frame::Comoving);
  if (d.other) {
    const GlobalMaxwellian M(x.c.params), Mt(*d.other);
    for (std::size_t i = 0; i < f.h.size(); ++i) {
      double v[3], z[3];
      f.position(i, v, z);
      f.h[i] = d.scale * std::exp(Mt.log_eval(v, z, 0.0) - M.log_eval(v, z, 0.0));
    }
  } else {
    for (double& h : f.h) h = d.scale;
  }
  return f;
}

Propagator make_propagator(const RunConfig& c) { return Propagator(c.params, c.kernel, c.grid, c.collision, c.solver); }

double sup_dev(const Vec& h) {
  return deterministic_max(h.size(), [&](std::size_t i) { return std::abs(h[i] - 1.0); });
}

double ratio_limit(const Propagator& P, double r) { return 4.0 * P.nu_bar() * (1.0 + r) + P.config().slack; }

void certify_contraction(Context& x, const Propagator& P, const PicardLog& log, double r, const std::string& tag) {
  x.s.check(tag + "_converged", log.converged, log.deltas.empty() ? 0.0 : log.deltas.back(), P.config().picard_tol, "<");
  x.s.check(tag + "_contraction_ratio", log.max_ratio() <= ratio_limit(P, r), log.max_ratio(), ratio_limit(P, r));
}

// Diagnostics per node into timeseries.csv plus drift / H / positivity checks.
void trajectory_checks(Context& x, const Propagator& P, const Trajectory& traj, double r, bool certify_positivity) {
  const int D = x.c.params.D;
  const int n = static_cast<int>(traj.h.size());
  const Checks& ck = x.c.checks;
  const PositivityVerdict pv = check_positivity(traj, r, ck.positivity_tol);
  if (certify_positivity)
    x.s.check("positivity_sandwich", pv.ok);
  else if (!pv.ok)
    x.s.warn("positivity sandwich not certified at this eps and violated: " + pv.message);
  bool positive = true;
  for (const auto& h : traj.h)
    for (double v : h) positive = positive && v > 0.0;
  if (!positive) {
    x.s.warn("trajectory has nonpositive values; H and entropy production skipped");
    return;
  }
  const auto diag = run_diagnostics(P, traj);
  const int mid = traj.times.middle();
  const Vec scale = moment_scales(traj.field(P.grid(), P.ref().params(), mid));
  double drift = 0.0, h_rise = -INFINITY, max_prod = -INFINITY;
  std::ostringstream os;
  os << 't';
  for (const auto& l : invariant_labels(D)) os << ',' << l;
  os << ",H,entropy_production,sup_dev\n";
  for (int j = 0; j < n; ++j) {
    const auto& d = diag[j];
    os << fmt(d.t);
    for (std::size_t k = 0; k < d.moments.size(); ++k) {
      os << ',' << fmt(d.moments[k]);
      drift = std::max(drift, std::abs(d.moments[k] - diag[mid].moments[k]) / scale[k]);
    }
    os << ',' << fmt(d.H) << ',' << fmt(d.entropy_production) << ',' << fmt(d.sup_dev) << '\n';
    if (j > 0) h_rise = std::max(h_rise, d.H - diag[j - 1].H);
    max_prod = std::max(max_prod, d.entropy_production);
  }
  write_text(x.out / "timeseries.csv", os.str());
  x.s.file("timeseries.csv");
  x.s.check("moment_drift", drift <= ck.drift_tol, drift, ck.drift_tol);
  x.s.check("H_nonincreasing", h_rise <= ck.h_slack, h_rise, ck.h_slack);
  x.s.results()["trajectory"] = {{"moment_drift", drift},
                                 {"max_H_step", h_rise},
                                 {"H_first", diag.front().H},
                                 {"H_last", diag.back().H},
                                 {"max_entropy_production", max_prod},
                                 {"max_sup_dev", [&] {
                                    double m = 0.0;
                                    for (const auto& d : diag) m = std::max(m, d.sup_dev);
                                    return m;
                                  }()},
                                 {"positivity", {{"ok", pv.ok}, {"lo", pv.lo}, {"hi", pv.hi}, {"message", pv.message}}}};
}

void dump_nodes(Context& x, const Propagator& P, const Trajectory& traj) {
  std::vector<int> nodes = x.c.dump_nodes;
  const int n = static_cast<int>(traj.h.size());
  if (nodes.empty()) nodes = {0, traj.times.middle(), n - 1};
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  for (int j : nodes) {
    char name[32];
    std::snprintf(name, sizeof name, "node_%02d", j);
    dump_field(x, traj.field(P.grid(), P.ref().params(), j), name);
  }
}

json certificate(const Propagator& P, double eps, double r) {
  return json{{"nu_bar", P.nu_bar()},
              {"four_nu_bar", 4.0 * P.nu_bar()},
              {"eps", eps},
              {"eps_max", eps_max(P.nu_bar())},
              {"r", r},
              {"r_max", r_max(P.nu_bar())},
              {"positivity_eps", positivity_threshold(P.nu_bar()).eps},
              {"T", number_or_inf(P.config().T)},
              {"Nt", P.config().Nt}};
}

void cmd_validate(Context& x) {
  const RunConfig& c = x.c;
  const GlobalMaxwellian M(c.params);
  const ParamCheck pc = validate_params(c.params);
  const DistributionField f = reference_field(c.grid, c.params, 0.0, Frame::Comoving);
  const double mass = moments(f)[0];
  const double H = h_functional(f);
  const double tail = c.grid.tail_fraction(M);
  json& r = x.s.results();
  r["maxwellian"] = params_to_json(c.params);
  r["min_eig_Q"] = pc.min_eig_Q;
  r["ac_minus_b2"] = pc.ac_minus_b2;
  r["peak"] = M.peak();
  r["entropy_closed_form"] = M.entropy();
  r["entropy_quadrature"] = H;
  r["mass_quadrature"] = mass;
  r["grid"] = grid_to_json(c.grid);
  r["grid_tail_fraction"] = tail;
  r["kernel"] = kernel_to_json(c.kernel);
  r["a_beta_zero"] = a_beta_zero(c.kernel.beta, c.params.D);
  r["invariants"] = labelled(M.invariants(), c.params.D);
  x.s.check("params_valid", pc.ok);
  x.s.check("grid_tail_fraction", tail < 1e-6, tail, 1e-6, "<");
  const double em = std::abs(mass - c.params.m) / c.params.m;
  const double eh = std::abs(H - M.entropy()) / std::max(std::abs(M.entropy()), c.params.m);
  x.s.check("mass_quadrature", em <= 1e-6, em, 1e-6);
  x.s.check("entropy_quadrature", eh <= 1e-6, eh, 1e-6);
  if (c.kernel.beta <= 1.0) {
    const double nu = nu_bound(M, c.kernel);
    r["nu_bar"] = nu;
    r["contraction_ok"] = 4.0 * nu < 1.0;
    if (!(4.0 * nu < 1.0)) x.s.warn("nu_bar >= 1/4: solver and scattering runs will be rejected for this mass");
  }
}

void cmd_bounds(Context& x) {
  const RunConfig& c = x.c;
  const GlobalMaxwellian M(c.params);
  const int D = c.params.D;
  const double beta = c.kernel.beta;
  const double p = 0.5 * (D + beta);
  json& r = x.s.results();
  r["a_beta_zero"] = a_beta_zero(beta, D);
  r["theta_integral_closed"] = theta_power_integral(c.params.a, c.params.b, c.params.c, p);
  if (beta > 1.0) {
    x.s.warn("beta > 1: nu and mu bounds are not available");
    return;
  }
  const BoundsReport b = compute_bounds(M, c.kernel, c.samples, x.seed);
  r["nu_bound"] = b.nu_bound;
  r["nu_numeric"] = b.nu_numeric;
  r["contraction_ok"] = b.contraction_ok;
  r["admissible_mass"] = admissible_mass(c.params, c.kernel, 1.0);
  r["theta_integral_quadrature"] = b.theta_integral_quadrature;
  x.s.check("nu_numeric_below_bound", b.nu_numeric <= b.nu_bound, b.nu_numeric, b.nu_bound);
  const double ti = std::abs(b.theta_integral_quadrature - b.theta_integral_closed) / b.theta_integral_closed;
  x.s.check("theta_integral", ti <= 1e-8, ti, 1e-8);
  if (b.contraction_ok) {
    r["r_max"] = b.r_max;
    r["eps_max"] = b.eps_max;
    r["eps_positivity"] = b.eps_positivity;
    r["positivity_unconditional"] = b.positivity_unconditional;
  } else {
    x.s.warn("nu_bar >= 1/4: no contraction ball for this mass");
  }
  if (b.mu_available) {
    r["mu_bound"] = b.mu_bound;
    r["mu_numeric"] = b.mu_numeric;
    r["mu_sharp"] = b.mu_sharp;
    x.s.check("mu_numeric_below_bound", b.mu_numeric <= b.mu_bound, b.mu_numeric, b.mu_bound);
  }
  if (D + beta > 1.0) r["truncation_T"] = number_or_inf(time_truncation(M, c.kernel, c.tail_tol > 0 ? c.tail_tol : 1e-10));
}

void cmd_simulate(Context& x) {
  const Propagator P = make_propagator(x.c);
  const DistributionField F_in = make_data(x, 0.0);
  const double eps = sup_dev(F_in.h);
  const PicardResult res = solve_cauchy(P, F_in);
  const double r = r_of_eps(P.nu_bar(), eps);
  x.s.results()["certificate"] = certificate(P, eps, r);
  x.s.results()["picard"] = log_json(res.log);
  write_iteration_log(x, res.log, "iteration.log");
  certify_contraction(x, P, res.log, r, "picard");
  const PositivityThreshold pt = positivity_threshold(P.nu_bar());
  trajectory_checks(x, P, res.traj, r, pt.unconditional || eps <= pt.eps);
  double dev = 0.0;
  for (const auto& h : res.traj.h) dev = std::max(dev, sup_dev(h));
  x.s.results()["sup_deviation"] = dev;
  dump_nodes(x, P, res.traj);
}

void cmd_scatter(Context& x) {
  const Propagator P = make_propagator(x.c);
  const int D = x.c.params.D;
  const Checks& ck = x.c.checks;
  const DistributionField Fm = make_data(x, P.times().t.front());
  const ScatterResult s = scatter(P, Fm);
  json& r = x.s.results();
  r["certificate"] = certificate(P, s.eps, s.r);
  r["picard"] = log_json(s.solve.log);
  r["output_sup_dev"] = s.out_dev;
  write_iteration_log(x, s.solve.log, "iteration.log");
  certify_contraction(x, P, s.solve.log, s.r, "picard");
  x.s.check("output_radius", s.out_dev <= s.r + ck.positivity_tol, s.out_dev, s.r + ck.positivity_tol);
  dump_field(x, Fm, "F_minus");
  dump_field(x, s.output, "F_plus");
  const ConservationReport cons = check_scatter_conservation(Fm, s.output);
  r["conservation"] = {{"before", labelled(cons.before, D)},
                       {"after", labelled(cons.after, D)},
                       {"relative_residual", labelled(cons.residual, D)}};
  x.s.check("conservation", cons.max_residual <= ck.conservation_tol, cons.max_residual, ck.conservation_tol);
  const PositivityThreshold pt = positivity_threshold(P.nu_bar());
  trajectory_checks(x, P, s.solve.traj, s.r, pt.unconditional || s.eps <= pt.eps);
  bool positive = true;
  for (double v : Fm.h) positive = positive && v > 0.0;
  for (double v : s.output.h) positive = positive && v > 0.0;
  if (positive) {
    const HReport h = check_H_decrease(Fm, s.output, ck.h_slack);
    const FitResult fit = fit_global_maxwellian(cons.before, D, ck.fit_tol);
    const double H_fit = GlobalMaxwellian(fit.params).entropy();
    r["H"] = {{"H_minus", h.H_minus}, {"H_plus", h.H_plus}, {"H_fit", H_fit}, {"maxwellian_like", h.equality}};
    r["fit"] = {{"params", params_to_json(fit.params)}, {"residual", fit.residual}, {"iterations", fit.iterations}};
    x.s.check("H_decrease", h.decreasing, h.H_plus - h.H_minus, ck.h_slack);
    x.s.check("H_above_fit", h.H_plus >= H_fit - ck.h_slack, h.H_plus, H_fit - ck.h_slack, ">=");
    x.s.check("fit_converged", fit.converged, fit.residual, ck.fit_tol, "<");
  } else {
    x.s.warn("nonpositive asymptotic state; H chain skipped");
  }
  if (x.c.round_trip) {
    const ScatterResult back = scatter_inverse(P, s.output);
    const double err = weighted_sup_norm(back.output, Fm);
    r["round_trip"] = {{"error", err}, {"picard", log_json(back.solve.log)}};
    certify_contraction(x, P, back.solve.log, back.r, "inverse_picard");
    x.s.check("round_trip", err <= ck.round_trip_tol, err, ck.round_trip_tol);
  }
}

void cmd_wave_inverse(Context& x) {
  const Propagator P = make_propagator(x.c);
  const Checks& ck = x.c.checks;
  const Direction d = x.c.direction;
  const DistributionField Finf = make_data(x, d == Direction::Plus ? P.times().t.back() : P.times().t.front());
  const ScatterResult w = wave_inverse(P, Finf, d);
  json& r = x.s.results();
  r["direction"] = direction_name(d);
  r["certificate"] = certificate(P, w.eps, w.r);
  r["picard"] = log_json(w.solve.log);
  r["output_sup_dev"] = w.out_dev;
  write_iteration_log(x, w.solve.log, "iteration.log");
  certify_contraction(x, P, w.solve.log, w.r, "picard");
  x.s.check("output_radius", w.out_dev <= w.r + ck.positivity_tol, w.out_dev, w.r + ck.positivity_tol);
  dump_field(x, Finf, "F_inf");
  dump_field(x, w.output, "F_in");
  if (x.c.round_trip) {
    const PicardResult fwd = solve_cauchy(P, w.output);
    const Asymptote a = extract_asymptote(P, fwd.traj, d);
    const double err = weighted_sup_norm(a.field, Finf);
    r["round_trip"] = {{"error", err}, {"tail_bound", a.tail_bound}, {"picard", log_json(fwd.log)}};
    x.s.check("round_trip", err <= ck.round_trip_tol + a.tail_bound, err, ck.round_trip_tol + a.tail_bound);
  }
}

void cmd_fit(Context& x) {
  const RunConfig& c = x.c;
  const int D = c.params.D;
  Vec mom = c.fit_moments;
  json& r = x.s.results();
  if (mom.empty()) {
    const DistributionField f = make_data(x, 0.0);
    mom = moments(f);
    bool positive = true;
    for (double v : f.h) positive = positive && v > 0.0;
    if (positive) r["H_data"] = h_functional(f);
  }
  const FitResult fit = fit_global_maxwellian(mom, D, c.checks.fit_tol);
  r["moments"] = labelled(mom, D);
  r["params"] = params_to_json(fit.params);
  r["residual"] = fit.residual;
  r["iterations"] = fit.iterations;
  if (validate_params(fit.params).ok) r["H_fit"] = GlobalMaxwellian(fit.params).entropy();
  x.s.check("fit_converged", fit.converged, fit.residual, c.checks.fit_tol, "<");
}

void cmd_report(Context& x) {
  std::vector<fs::path> dirs;
  for (const auto& d : x.c.report_runs) dirs.emplace_back(d);
  if (dirs.empty() && fs::is_directory(x.out)) {
    for (const auto& e : fs::directory_iterator(x.out))
      if (e.is_directory() && fs::exists(e.path() / "summary.json")) dirs.push_back(e.path());
    std::sort(dirs.begin(), dirs.end());
  }
  json runs = json::array();
  std::ostringstream md;
  md << "| run | command | status | failed assertions |\n|---|---|---|---|\n";
  for (const auto& d : dirs) {
    std::ifstream in(d / "summary.json");
    require(static_cast<bool>(in), ErrorKind::Io, "report: no summary.json in " + d.string());
    json s;
    try {
      s = json::parse(in);
    } catch (const json::exception& e) {
      fail(ErrorKind::Io, "report: unreadable summary.json in " + d.string() + ": " + e.what());
    }
    json failed = json::array();
    for (const auto& a : s.value("assertions", json::array()))
      if (!a.value("ok", false)) failed.push_back(a.value("name", ""));
    const std::string status = s.value("status", "unknown");
    runs.push_back({{"run", d.filename().string()}, {"command", s.value("command", "")}, {"status", status},
                    {"failed", failed}, {"warnings", s.value("warnings", json::array()).size()}});
    x.s.check("run_" + d.filename().string(), status == "pass");
    md << "| " << d.filename().string() << " | " << s.value("command", "") << " | " << status << " | ";
    for (std::size_t i = 0; i < failed.size(); ++i) md << (i ? ", " : "") << failed[i].get<std::string>();
    md << " |\n";
  }
  x.s.results()["runs"] = runs;
  write_text(x.out / "report.md", md.str());
  x.s.file("report.md");
}

}  // namespace

RunStatus run(const RunConfig& config, const RunOptions& options) {
  set_num_threads(options.threads);
  const fs::path out(options.out_dir);
  fs::create_directories(out);
  Summary s(options.strict);
  Context x{config, options, out, options.seed.value_or(config.seed), s};
  std::string status = "pass";
  std::string error;
  try {
    switch (config.command) {
      case Command::Validate: cmd_validate(x); break;
      case Command::Bounds: cmd_bounds(x); break;
      case Command::Simulate: cmd_simulate(x); break;
      case Command::Scatter: cmd_scatter(x); break;
      case Command::WaveInverse: cmd_wave_inverse(x); break;
      case Command::Fit: cmd_fit(x); break;
      case Command::Report: cmd_report(x); break;
    }
  } catch (const std::exception& e) {
    json j = s.finish(config, x.seed, "error");
    j["error"] = e.what();
    write_text(out / "summary.json", j.dump(2) + "\n");
    throw;
  }
  if (s.failed()) status = "fail";
  write_text(out / "summary.json", s.finish(config, x.seed, status).dump(2) + "\n");
  return s.failed() ? kRunFail : kRunPass;
}

RunStatus run_command(Command command, const std::string& config_path, const RunOptions& options,
                      std::string* message) {
  RunConfig c;
  try {
    if (command == Command::Report && config_path.empty()) {
      c.command = Command::Report;
      c.source = "{}";
    } else {
      c = load_config(config_path, command);
    }
  } catch (const std::exception& e) {
    if (message) *message = e.what();
    try {
      fs::create_directories(options.out_dir);
      const json j{{"version", kVersion}, {"command", command_name(command)}, {"config_path", config_path},
                   {"status", "error"}, {"partial", true}, {"error", e.what()}};
      write_text(fs::path(options.out_dir) / "summary.json", j.dump(2) + "\n");
    } catch (const std::exception&) {
    }
    return kRunError;
  }
  try {
    return run(c, options);
  } catch (const std::exception& e) {
    if (message) *message = e.what();
    return kRunError;
  }
}

}  // namespace bz
