#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "boltzscat/config.hpp"

namespace bz {

struct RunOptions {
  std::string out_dir = ".";
  int threads = 1;
  std::optional<std::uint64_t> seed;  // overrides the config seed and the perturbation seed
  bool strict = false;                // warnings count as failed assertions
};

// Exit-code contract of the CLI.
enum RunStatus { kRunPass = 0, kRunError = 1, kRunFail = 2 };

// Runs an already loaded config, writing summary.json and the command's
// other outputs under options.out_dir. Throws Error on execution errors.
RunStatus run(const RunConfig& config, const RunOptions& options);

// load_config + run. Errors are caught, recorded in summary.json (status
// "error", partial outputs flagged) and returned as kRunError; `message`
// receives the error text.
RunStatus run_command(Command command, const std::string& config_path, const RunOptions& options,
                      std::string* message = nullptr);

}  // namespace bz
