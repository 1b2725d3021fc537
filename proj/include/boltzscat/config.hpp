#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "boltzscat/scattering.hpp"

namespace bz {

enum class Command { Validate, Bounds, Simulate, Scatter, WaveInverse, Fit, Report };
const char* command_name(Command c);
Command parse_command(const std::string& s);

// Initial or asymptotic data on the phase grid, as h = F / M_ref(0).
//   "maxwellian": scale * Mtilde(0) / M(0); Mtilde defaults to the reference.
//   "perturbed":  smooth random perturbation of size eps.
//   "field":      a field dump, given by its manifest path.
struct DataSpec {
  std::string kind = "maxwellian";
  double scale = 1.0;
  std::optional<Params> other;
  Perturbation perturbation;
  std::string path;
};

struct Checks {
  double h_slack = 1e-6;          // H may grow by this much between nodes
  double drift_tol = 1e-3;        // relative moment drift
  double positivity_tol = 1e-9;
  double round_trip_tol = 1e-4;   // weighted sup
  double conservation_tol = 1e-3; // relative
  double fit_tol = 1e-10;
};

struct RunConfig {
  std::string source;  // exact text of the config file
  Command command = Command::Validate;
  Params params;
  double mass_margin = 0.0;  // > 0: m replaced by mass_margin * admissible mass
  KernelSpec kernel;
  PhaseGrid grid;
  double nsigma = 5.5;
  CollisionSetup collision;
  SolverConfig solver;
  double tail_tol = 0.0;  // truncation tolerance used when T is chosen automatically
  bool T_automatic = false;
  DataSpec data;
  Direction direction = Direction::Plus;
  bool round_trip = true;
  std::vector<int> dump_nodes;  // empty: first, middle, last
  int samples = 4096;
  std::uint64_t seed = 1;
  Checks checks;
  std::vector<double> fit_moments;  // fit: explicit moment vector (else moments of the data)
  std::vector<std::string> report_runs;
};

// Parses and validates for the given command (the file may name one under
// "command"; an explicit argument wins). Throws Error naming the field.
RunConfig load_config_text(const std::string& text, std::optional<Command> command = std::nullopt);
RunConfig load_config(const std::string& path, std::optional<Command> command = std::nullopt);

// The resolved configuration (every default filled in), as JSON text.
std::string resolved_config_json(const RunConfig& c);

}  // namespace bz
