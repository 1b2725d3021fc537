#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "boltzscat/c_api.h"

int main(int argc, char** argv) {
  CLI::App app{"Boltzmann dynamics near global Maxwellians: bounds, Cauchy solves and scattering"};
  app.set_version_flag("--version", std::string(bz_version()));
  app.require_subcommand(1, 1);

  std::string config, out = ".";
  int threads = 1;
  long long seed = -1;
  bool strict = false;

  const char* commands[][2] = {
      {"validate", "Check a Maxwellian, kernel and grid; quadrature mass and H"},
      {"bounds", "Dispersion constants nu and mu, admissible mass, radii"},
      {"simulate", "Cauchy problem by Picard iteration, with diagnostics"},
      {"scatter", "Scattering operator S on F^{-inf} (and the inverse round trip)"},
      {"wave-inverse", "Inverse wave operator from an asymptotic state"},
      {"fit", "Global Maxwellian matching a moment vector"},
      {"report", "Collect summary.json files of runs below --out"},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c[0], c[1]);
    auto* opt = sub->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
    if (std::string(c[0]) != "report") opt->required();
    sub->add_option("--out", out, "Output directory")->capture_default_str();
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--seed", seed, "Override the config seed")->check(CLI::NonNegativeNumber);
    sub->add_flag("--strict", strict, "Count warnings as failures");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  int exit_code = 1;
  const bz_status st = bz_run(cmd.c_str(), config.empty() ? nullptr : config.c_str(), out.c_str(), threads,
                              static_cast<int64_t>(seed), strict ? 1 : 0, &exit_code);
  if (st != BZ_OK) {
    std::fprintf(stderr, "error: %s\n", bz_last_error());
    return 1;
  }
  if (exit_code == 1) std::fprintf(stderr, "error: %s\n", bz_last_error());
  else std::printf("%s: %s (%s/summary.json)\n", cmd.c_str(), exit_code == 0 ? "pass" : "FAIL", out.c_str());
  return exit_code;
}
