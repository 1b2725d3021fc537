#include "boltzscat/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json_io.hpp"

namespace bz {

namespace {

constexpr const char* kCommands[] = {"validate", "bounds", "simulate", "scatter", "wave-inverse", "fit", "report"};

bool needs_solver(Command c) {
  return c == Command::Simulate || c == Command::Scatter || c == Command::WaveInverse;
}

template <class T>
T get_or(const json& j, const char* section, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    fail(ErrorKind::InvalidArgument, std::string(section) + "." + key + ": wrong type");
  }
}

const json& section(const json& root, const char* name) {
  static const json empty = json::object();
  if (!root.contains(name)) return empty;
  require(root[name].is_object(), ErrorKind::InvalidArgument, std::string(name) + ": expected an object");
  return root[name];
}

DataSpec data_from_json(const json& j, int D) {
  DataSpec d;
  d.kind = get_or<std::string>(j, "data", "kind", d.kind);
  if (d.kind == "maxwellian") {
    d.scale = get_or(j, "data", "scale", 1.0);
    require(d.scale > 0.0, ErrorKind::InvalidArgument, "data.scale: must be positive");
    if (j.contains("params")) {
      d.other = params_from_json(j["params"]);
      require(d.other->D == D, ErrorKind::InvalidArgument, "data.params.D: does not match maxwellian.D");
      const ParamCheck pc = validate_params(*d.other);
      require(pc.ok, ErrorKind::Domain, "data.params: " + pc.reason);
    }
  } else if (d.kind == "perturbed") {
    d.perturbation.eps = get_or(j, "data", "eps", 0.1);
    d.perturbation.seed = get_or<std::uint64_t>(j, "data", "seed", 1);
    d.perturbation.modes = get_or(j, "data", "modes", 4);
    d.perturbation.kmax = get_or(j, "data", "kmax", 1.0);
    require(d.perturbation.eps >= 0.0, ErrorKind::InvalidArgument, "data.eps: must be nonnegative");
    require(d.perturbation.modes >= 1, ErrorKind::InvalidArgument, "data.modes: must be at least 1");
    require(d.perturbation.kmax >= 0.0, ErrorKind::InvalidArgument, "data.kmax: must be nonnegative");
  } else if (d.kind == "field") {
    d.path = get_or<std::string>(j, "data", "path", "");
    require(!d.path.empty(), ErrorKind::InvalidArgument, "data.path: required for kind \"field\"");
  } else {
    fail(ErrorKind::InvalidArgument, "data.kind: expected \"maxwellian\", \"perturbed\" or \"field\"");
  }
  return d;
}

}  // namespace

const char* command_name(Command c) { return kCommands[static_cast<int>(c)]; }

Command parse_command(const std::string& s) {
  for (int i = 0; i < 7; ++i)
    if (s == kCommands[i]) return static_cast<Command>(i);
  fail(ErrorKind::InvalidArgument,
       "unknown command \"" + s + "\" (expected validate, bounds, simulate, scatter, wave-inverse, fit or report)");
}

RunConfig load_config_text(const std::string& text, std::optional<Command> command) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::InvalidArgument, std::string("config: ") + e.what());
  }
  require(root.is_object(), ErrorKind::InvalidArgument, "config: top level must be an object");
  RunConfig c;
  c.source = text;
  if (command)
    c.command = *command;
  else
    c.command = parse_command(get_or<std::string>(root, "config", "command", "validate"));
  if (c.command == Command::Report) {
    c.report_runs = get_or<std::vector<std::string>>(section(root, "report"), "report", "runs", {});
    return c;
  }

  try {
    const json& mj = section(root, "maxwellian");
    c.params = params_from_json(mj);
    c.mass_margin = get_or(mj, "maxwellian", "mass_margin", 0.0);
    const int D = c.params.D;
    require(D == 2 || D == 3, ErrorKind::InvalidArgument, "maxwellian.D: must be 2 or 3");
    c.kernel = kernel_from_json(section(root, "kernel"), D);
    const double beta = c.kernel.beta;
    require(beta > 1.0 - D, ErrorKind::Domain,
            "kernel.beta: " + std::to_string(beta) + " must exceed 1 - D = " + std::to_string(1 - D));
    c.kernel.check();
    if (c.mass_margin != 0.0) {
      require(c.mass_margin > 0.0 && c.mass_margin <= 1.0, ErrorKind::InvalidArgument,
              "maxwellian.mass_margin: must lie in (0, 1]");
      require(beta <= 1.0, ErrorKind::Domain, "maxwellian.mass_margin: needs kernel.beta <= 1");
      c.params.m = admissible_mass(c.params, c.kernel, c.mass_margin);
    }
    const ParamCheck pc = validate_params(c.params);
    require(pc.ok, ErrorKind::Domain, "maxwellian: " + pc.reason);
    const GlobalMaxwellian M(c.params);

    const json& gj = section(root, "grid");
    require(get_or(gj, "grid", "D", D) == D, ErrorKind::InvalidArgument, "grid.D: does not match maxwellian.D");
    c.nsigma = get_or(gj, "grid", "nsigma", 5.5);
    const int Nv = get_or(gj, "grid", "Nv", 16), Nx = get_or(gj, "grid", "Nx", 16);
    require(Nv >= 4 && Nx >= 4, ErrorKind::InvalidArgument, "grid.Nv, grid.Nx: need at least 4 points per axis");
    require(c.nsigma > 0.0, ErrorKind::InvalidArgument, "grid.nsigma: must be positive");
    c.grid = PhaseGrid::around(M, Nv, Nx, c.nsigma);
    if (gj.contains("Vmax")) c.grid.Vmax = get_or(gj, "grid", "Vmax", 0.0);
    if (gj.contains("Xmax")) c.grid.Xmax = get_or(gj, "grid", "Xmax", 0.0);
    require(c.grid.Vmax > 0.0 && c.grid.Xmax > 0.0, ErrorKind::InvalidArgument, "grid.Vmax, grid.Xmax: must be positive");

    const json& cj = section(root, "collision");
    c.collision.n_xi = get_or(cj, "collision", "n_xi", c.collision.n_xi);
    c.collision.xi_halfwidth = get_or(cj, "collision", "xi_halfwidth", c.collision.xi_halfwidth);
    c.collision.n_eta = get_or(cj, "collision", "n_eta", c.collision.n_eta);
    c.collision.eta_halfwidth = get_or(cj, "collision", "eta_halfwidth", c.collision.eta_halfwidth);
    c.collision.n_omega = get_or(cj, "collision", "n_omega", c.collision.n_omega);
    c.collision.interp_order = get_or(cj, "collision", "interp_order", c.collision.interp_order);

    const json& sj = section(root, "solver");
    c.solver.picard_tol = get_or(sj, "solver", "picard_tol", c.solver.picard_tol);
    c.solver.max_iters = get_or(sj, "solver", "max_iters", c.solver.max_iters);
    c.solver.slack = get_or(sj, "solver", "slack", c.solver.slack);
    require(c.solver.picard_tol > 0.0, ErrorKind::InvalidArgument, "solver.picard_tol: must be positive");
    require(c.solver.max_iters >= 1, ErrorKind::InvalidArgument, "solver.max_iters: must be at least 1");
    require(c.solver.slack >= 0.0, ErrorKind::InvalidArgument, "solver.slack: must be nonnegative");

    const json& tj = section(root, "time");
    c.solver.Nt = get_or(tj, "time", "Nt", c.solver.Nt);
    c.tail_tol = get_or(tj, "time", "tail_tol", 0.1 * c.solver.picard_tol);
    require(c.tail_tol > 0.0, ErrorKind::InvalidArgument, "time.tail_tol: must be positive");
    if (tj.contains("T")) {
      c.solver.T = number_or_inf(tj["T"]);
      require(c.solver.T >= 0.0, ErrorKind::InvalidArgument, "time.T: must be nonnegative");
      require(std::isfinite(c.solver.T) || D + beta >= 2.0, ErrorKind::Domain,
              "time.T: \"inf\" needs D + beta >= 2; give a finite T");
    } else if (D + beta >= 2.0) {
      c.solver.T = std::numeric_limits<double>::infinity();
    } else {
      c.T_automatic = true;
    }
    require(c.solver.Nt >= 3 && c.solver.Nt % 2 == 1, ErrorKind::InvalidArgument, "time.Nt: must be odd and at least 3");

    c.data = data_from_json(section(root, "data"), D);
    const json& oj = section(root, "output");
    c.dump_nodes = get_or<std::vector<int>>(oj, "output", "dump_nodes", {});
    for (int j : c.dump_nodes)
      require(j >= 0 && j < c.solver.Nt, ErrorKind::InvalidArgument, "output.dump_nodes: index outside [0, Nt)");

    const json& bj = section(root, "bounds");
    c.samples = get_or(bj, "bounds", "samples", c.samples);
    require(c.samples >= 1, ErrorKind::InvalidArgument, "bounds.samples: must be positive");
    c.seed = get_or<std::uint64_t>(root, "config", "seed", c.seed);

    const json& kj = section(root, "checks");
    c.checks.h_slack = get_or(kj, "checks", "h_slack", c.checks.h_slack);
    c.checks.drift_tol = get_or(kj, "checks", "drift_tol", c.checks.drift_tol);
    c.checks.positivity_tol = get_or(kj, "checks", "positivity_tol", c.checks.positivity_tol);
    c.checks.round_trip_tol = get_or(kj, "checks", "round_trip_tol", c.checks.round_trip_tol);
    c.checks.conservation_tol = get_or(kj, "checks", "conservation_tol", c.checks.conservation_tol);
    c.checks.fit_tol = get_or(kj, "checks", "fit_tol", c.checks.fit_tol);

    const json& wj = section(root, "wave");
    const std::string dir = get_or<std::string>(wj, "wave", "direction", "plus");
    require(dir == "plus" || dir == "minus", ErrorKind::InvalidArgument, "wave.direction: expected \"plus\" or \"minus\"");
    c.direction = dir == "plus" ? Direction::Plus : Direction::Minus;
    c.round_trip = get_or(wj, "wave", "round_trip", c.round_trip);

    c.fit_moments = get_or<std::vector<double>>(section(root, "fit"), "fit", "moments", {});
    if (!c.fit_moments.empty())
      require(static_cast<int>(c.fit_moments.size()) == invariant_count(D), ErrorKind::InvalidArgument,
              "fit.moments: expected " + std::to_string(invariant_count(D)) + " entries");

    if (needs_solver(c.command)) {
      require(beta <= 1.0, ErrorKind::Domain,
              "kernel.beta: " + std::string(command_name(c.command)) + " needs beta <= 1");
      const double nu = nu_bound(M, c.kernel);
      if (!(4.0 * nu < 1.0)) {
        std::ostringstream os;
        os.precision(6);
        os << "maxwellian.m: certified nu = " << nu << " violates nu < 1/4; " << command_name(c.command)
           << " needs m < " << admissible_mass(c.params, c.kernel, 1.0) << " for this shape and kernel";
        fail(ErrorKind::Domain, os.str());
      }
      if (c.T_automatic) c.solver.T = time_truncation(M, c.kernel, c.tail_tol);
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("config: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path, std::optional<Command> command) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::Io, "config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_config_text(ss.str(), command);
}

std::string resolved_config_json(const RunConfig& c) {
  json j;
  j["command"] = command_name(c.command);
  if (c.command == Command::Report) {
    j["report"] = {{"runs", c.report_runs}};
    return j.dump();
  }
  j["maxwellian"] = params_to_json(c.params);
  if (c.mass_margin > 0.0) j["maxwellian"]["mass_margin"] = c.mass_margin;
  j["kernel"] = kernel_to_json(c.kernel);
  j["grid"] = grid_to_json(c.grid);
  j["grid"]["nsigma"] = c.nsigma;
  j["collision"] = {{"n_xi", c.collision.n_xi},
                    {"xi_halfwidth", c.collision.xi_halfwidth},
                    {"n_eta", c.collision.n_eta},
                    {"eta_halfwidth", c.collision.eta_halfwidth},
                    {"n_omega", c.collision.n_omega},
                    {"interp_order", c.collision.interp_order}};
  j["solver"] = {{"picard_tol", c.solver.picard_tol}, {"max_iters", c.solver.max_iters}, {"slack", c.solver.slack}};
  j["time"] = {{"T", number_or_inf(c.solver.T)}, {"Nt", c.solver.Nt}, {"tail_tol", c.tail_tol},
               {"T_automatic", c.T_automatic}};
  json d{{"kind", c.data.kind}};
  if (c.data.kind == "maxwellian") {
    d["scale"] = c.data.scale;
    if (c.data.other) d["params"] = params_to_json(*c.data.other);
  } else if (c.data.kind == "perturbed") {
    d["eps"] = c.data.perturbation.eps;
    d["seed"] = c.data.perturbation.seed;
    d["modes"] = c.data.perturbation.modes;
    d["kmax"] = c.data.perturbation.kmax;
  } else {
    d["path"] = c.data.path;
  }
  j["data"] = d;
  j["wave"] = {{"direction", direction_name(c.direction)}, {"round_trip", c.round_trip}};
  j["output"] = {{"dump_nodes", c.dump_nodes}};
  j["bounds"] = {{"samples", c.samples}};
  j["seed"] = c.seed;
  j["checks"] = {{"h_slack", c.checks.h_slack},
                 {"drift_tol", c.checks.drift_tol},
                 {"positivity_tol", c.checks.positivity_tol},
                 {"round_trip_tol", c.checks.round_trip_tol},
                 {"conservation_tol", c.checks.conservation_tol},
                 {"fit_tol", c.checks.fit_tol}};
  if (!c.fit_moments.empty()) j["fit"] = {{"moments", c.fit_moments}};
  return j.dump();
}

}  // namespace bz
