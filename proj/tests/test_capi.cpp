#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>

#include "boltzscat/c_api.h"
#include "json_io.hpp"

namespace fs = std::filesystem;

TEST_CASE("version and error state") {
  CHECK(std::string(bz_version()) == "0.3.0");
  CHECK(bz_set_threads(0) == BZ_ERR_INVALID_ARGUMENT);
  CHECK(std::string(bz_last_error()).find("thread") != std::string::npos);
  CHECK(bz_set_threads(1) == BZ_OK);
  CHECK(std::string(bz_last_error()).empty());
}

TEST_CASE("Maxwellian handles") {
  bz_maxwellian* M = nullptr;
  REQUIRE(bz_maxwellian_create(2, 1.0, 1.0, 0.0, 1.0, nullptr, nullptr, nullptr, &M) == BZ_OK);
  const double v[2] = {0.0, 0.0}, x[2] = {0.0, 0.0};
  double f = 0.0, H = 0.0;
  CHECK(bz_maxwellian_eval(M, v, x, 0.0, &f) == BZ_OK);
  CHECK(f == doctest::Approx(1.0 / (4.0 * std::numbers::pi * std::numbers::pi)));
  CHECK(bz_maxwellian_entropy(M, &H) == BZ_OK);
  CHECK(H == doctest::Approx(-std::log(4.0 * std::numbers::pi * std::numbers::pi) - 2.0));
  double inv[9];
  size_t n = 0;
  CHECK(bz_maxwellian_invariants(M, inv, 9, &n) == BZ_OK);
  CHECK(n == 9);
  CHECK(inv[0] == doctest::Approx(1.0));
  CHECK(bz_maxwellian_invariants(M, inv, 4, &n) == BZ_ERR_INVALID_ARGUMENT);
  CHECK(n == 9);
  CHECK(bz_maxwellian_eval(M, nullptr, x, 0.0, &f) == BZ_ERR_INVALID_ARGUMENT);

  char* js = nullptr;
  REQUIRE(bz_bounds_json(M, 0.0, 1.0, 64, 1, &js) == BZ_OK);
  const bz::json j = bz::json::parse(js);
  bz_string_free(js);
  CHECK(j["nu_bound"].get<double>() == doctest::Approx(2.0 * std::sqrt(2.0 * std::numbers::pi)));
  CHECK_FALSE(j["contraction_ok"].get<bool>());
  CHECK(j.contains("mu_bound"));
  CHECK(bz_bounds_json(M, -1.5, 1.0, 64, 1, &js) == BZ_ERR_DOMAIN);
  bz_maxwellian_destroy(M);

  bz_maxwellian* bad = nullptr;
  CHECK(bz_maxwellian_create(2, 1.0, 1.0, 2.0, 1.0, nullptr, nullptr, nullptr, &bad) == BZ_ERR_DOMAIN);
  CHECK(bad == nullptr);
  CHECK(bz_maxwellian_create(5, 1.0, 1.0, 0.0, 1.0, nullptr, nullptr, nullptr, &bad) == BZ_ERR_INVALID_ARGUMENT);
  bz_maxwellian_destroy(nullptr);
}

TEST_CASE("bz_run exit codes") {
  const fs::path base = fs::temp_directory_path() / "boltzscat_test_capi";
  fs::remove_all(base);
  const std::string data = BZ_TEST_DATA;
  int code = -1;
  CHECK(bz_run("bounds", (data + "/bounds_heavy.json").c_str(), (base / "bounds").c_str(), 1, -1, 0, &code) == BZ_OK);
  CHECK(code == 0);
  CHECK(fs::exists(base / "bounds" / "summary.json"));
  CHECK(bz_run("simulate", (data + "/bounds_heavy.json").c_str(), (base / "sim").c_str(), 1, -1, 0, &code) == BZ_OK);
  CHECK(code == 1);
  CHECK(std::string(bz_last_error()).find("nu < 1/4") != std::string::npos);
  CHECK(fs::exists(base / "sim" / "summary.json"));
  CHECK(bz_run("fly", "x", (base / "x").c_str(), 1, -1, 0, &code) == BZ_ERR_INVALID_ARGUMENT);
  CHECK(bz_run("validate", nullptr, (base / "x").c_str(), 1, -1, 0, &code) == BZ_ERR_INVALID_ARGUMENT);
  CHECK(bz_run("validate", "x", (base / "x").c_str(), 0, -1, 0, &code) == BZ_ERR_INVALID_ARGUMENT);
}
