#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "boltzscat/run.hpp"
#include "json_io.hpp"

using namespace bz;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({
  "maxwellian": {"D": 2, "m": 0.05},
  "kernel": {"D": 2, "beta": 0}
})";

std::string error_of(const std::string& text, std::optional<Command> cmd = std::nullopt) {
  try {
    load_config_text(text, cmd);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

bool has(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("a minimal config gets every default") {
  const RunConfig c = load_config_text(kMinimal);
  CHECK(c.command == Command::Validate);
  CHECK(c.params.m == 0.05);
  CHECK(c.grid.Nv == 16);
  CHECK(c.solver.Nt == 17);
  CHECK(std::isinf(c.solver.T));
  CHECK(c.data.kind == "maxwellian");
  CHECK(c.kernel.bbar == doctest::Approx(2.0 * std::numbers::pi));
  const json r = json::parse(resolved_config_json(c));
  CHECK(r["time"]["T"] == "inf");
  CHECK(r["checks"]["drift_tol"] == 1e-3);
  // The resolved config loads back to the same thing.
  const RunConfig again = load_config_text(resolved_config_json(c));
  CHECK(again.grid == c.grid);
  CHECK(again.params.m == c.params.m);
}

TEST_CASE("beta must exceed 1 - D") {
  const std::string e = error_of(R"({"maxwellian": {"D": 2}, "kernel": {"beta": -1.0}})");
  CHECK(has(e, "kernel.beta"));
  CHECK(error_of(R"({"maxwellian": {"D": 3}, "kernel": {"beta": -1.5}})").empty());
  CHECK_FALSE(error_of(R"({"maxwellian": {"D": 3}, "kernel": {"beta": -2.0}})").empty());
}

TEST_CASE("oversized mass: simulate rejects, bounds accepts") {
  const std::string text = R"({"maxwellian": {"D": 2, "m": 1.0}, "kernel": {"beta": 0}})";
  const std::string e = error_of(text, Command::Simulate);
  CHECK(has(e, "maxwellian.m"));
  CHECK(has(e, "nu < 1/4"));
  CHECK(error_of(text, Command::Bounds).empty());
  CHECK(error_of(text, Command::Validate).empty());
  CHECK_FALSE(error_of(text, Command::Scatter).empty());
  const RunConfig c = load_config_text(R"({"maxwellian": {"D": 2, "mass_margin": 0.5}, "kernel": {"beta": 0}})",
                                       Command::Simulate);
  CHECK(4.0 * nu_bound(GlobalMaxwellian(c.params), c.kernel) == doctest::Approx(0.5));
}

TEST_CASE("malformed input is reported with its location") {
  CHECK(has(error_of("{\n  \"maxwellian\": {\n    \"D\": 2,,\n  }\n}"), "line 3"));
  CHECK(has(error_of(R"({"maxwellian": {"D": 2}, "kernel": {"bbar": 1.0}})"), "kernel.bbar"));
  CHECK(has(error_of(R"({"maxwellian": {"D": 2}, "kernel": {"beta": -0.5}, "time": {"T": "inf"}})",
                     Command::Simulate),
            "time.T"));
  CHECK(has(error_of(R"({"maxwellian": {"D": 2}, "data": {"kind": "soup"}})"), "data.kind"));
  CHECK(has(error_of(R"({"maxwellian": {"D": 2}, "time": {"Nt": 8}})"), "time.Nt"));
  CHECK(has(error_of(R"({"command": "dance", "maxwellian": {"D": 2}})"), "dance"));
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
}

TEST_CASE("soft kernels in D = 2 pick a finite window automatically") {
  const RunConfig c = load_config_text(R"({"maxwellian": {"D": 2, "mass_margin": 0.4}, "kernel": {"beta": -0.5}})",
                                       Command::Simulate);
  CHECK(c.T_automatic);
  CHECK(std::isfinite(c.solver.T));
  CHECK(truncation_tail(GlobalMaxwellian(c.params), c.kernel, c.solver.T) < c.tail_tol);
}

TEST_CASE("the translated Gaussian example validates") {
  const fs::path out = fs::temp_directory_path() / "boltzscat_test_validate";
  fs::remove_all(out);
  RunConfig c = load_config(std::string(BZ_TEST_DATA) + "/validate_gaussian.json");
  CHECK(c.params.a == 2.0);
  RunOptions o;
  o.out_dir = out.string();
  CHECK(run(c, o) == kRunPass);
  std::ifstream in(out / "summary.json");
  const json s = json::parse(in);
  CHECK(s["status"] == "pass");
  CHECK(s["version"] == kVersion);
  CHECK(s["config"]["maxwellian"]["a"] == 2);
}
