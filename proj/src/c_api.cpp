#include "boltzscat/c_api.h"

#include <cstring>
#include <new>
#include <string>

#include "boltzscat/bounds.hpp"
#include "boltzscat/parallel.hpp"
#include "boltzscat/run.hpp"
#include "json_io.hpp"

struct bz_maxwellian {
  bz::GlobalMaxwellian M;
};

namespace {

thread_local std::string g_last_error;

bz_status code_of(bz::ErrorKind k) {
  switch (k) {
    case bz::ErrorKind::InvalidArgument: return BZ_ERR_INVALID_ARGUMENT;
    case bz::ErrorKind::Domain: return BZ_ERR_DOMAIN;
    case bz::ErrorKind::Convergence: return BZ_ERR_CONVERGENCE;
    case bz::ErrorKind::Io: return BZ_ERR_IO;
  }
  return BZ_ERR_INTERNAL;
}

template <class F>
bz_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return BZ_OK;
  } catch (const bz::Error& e) {
    g_last_error = e.what();
    return code_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return BZ_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BZ_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  bz::require(p != nullptr, bz::ErrorKind::InvalidArgument, std::string(what) + " is NULL");
}

}  // namespace

extern "C" {

const char* bz_version(void) { return bz::kVersion; }

const char* bz_last_error(void) { return g_last_error.c_str(); }

bz_status bz_set_threads(int n) {
  return guarded([&] {
    bz::require(n >= 1, bz::ErrorKind::InvalidArgument, "thread count must be at least 1");
    bz::set_num_threads(n);
  });
}

bz_status bz_run(const char* command, const char* config_path, const char* out_dir, int threads, int64_t seed,
                 int strict, int* exit_code) {
  return guarded([&] {
    need(command, "command");
    need(out_dir, "out_dir");
    need(exit_code, "exit_code");
    *exit_code = bz::kRunError;
    const bz::Command cmd = bz::parse_command(command);
    bz::require(config_path != nullptr || cmd == bz::Command::Report, bz::ErrorKind::InvalidArgument,
                "config_path is NULL");
    bz::require(threads >= 1, bz::ErrorKind::InvalidArgument, "thread count must be at least 1");
    bz::RunOptions o;
    o.out_dir = out_dir;
    o.threads = threads;
    if (seed >= 0) o.seed = static_cast<std::uint64_t>(seed);
    o.strict = strict != 0;
    std::string msg;
    *exit_code = bz::run_command(cmd, config_path ? config_path : "", o, &msg);
    g_last_error = msg;
  });
}

bz_status bz_maxwellian_create(int D, double m, double a, double b, double c, const double* B, const double* x0,
                               const double* v0, bz_maxwellian** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    bz::require(D == 2 || D == 3, bz::ErrorKind::InvalidArgument, "D must be 2 or 3");
    bz::Params p = bz::Params::unit(D, m);
    p.a = a;
    p.b = b;
    p.c = c;
    for (int i = 0; i < D; ++i) {
      if (x0) p.x0[i] = x0[i];
      if (v0) p.v0[i] = v0[i];
      for (int k = 0; k < D && B; ++k) p.B(i, k) = B[i * D + k];
    }
    const bz::ParamCheck pc = bz::validate_params(p);
    bz::require(pc.ok, bz::ErrorKind::Domain, "invalid Maxwellian: " + pc.reason);
    *out = new bz_maxwellian{bz::GlobalMaxwellian(p)};
  });
}

void bz_maxwellian_destroy(bz_maxwellian* M) { delete M; }

bz_status bz_maxwellian_eval(const bz_maxwellian* M, const double* v, const double* x, double t, double* out) {
  return guarded([&] {
    need(M, "handle");
    need(v, "v");
    need(x, "x");
    need(out, "out");
    *out = M->M.eval(v, x, t);
  });
}

bz_status bz_maxwellian_entropy(const bz_maxwellian* M, double* out) {
  return guarded([&] {
    need(M, "handle");
    need(out, "out");
    *out = M->M.entropy();
  });
}

bz_status bz_maxwellian_invariants(const bz_maxwellian* M, double* out, size_t capacity, size_t* count) {
  return guarded([&] {
    need(M, "handle");
    need(count, "count");
    const bz::Vec v = M->M.invariants();
    *count = v.size();
    bz::require(out != nullptr && capacity >= v.size(), bz::ErrorKind::InvalidArgument, "output buffer too small");
    std::memcpy(out, v.data(), v.size() * sizeof(double));
  });
}

bz_status bz_bounds_json(const bz_maxwellian* M, double beta, double bhat_const, int samples, uint64_t seed,
                         char** json_out) {
  return guarded([&] {
    need(M, "handle");
    need(json_out, "json_out");
    *json_out = nullptr;
    const bz::KernelSpec k = bz::KernelSpec::constant(M->M.dim(), beta, bhat_const);
    k.check();
    const bz::BoundsReport b = bz::compute_bounds(M->M, k, samples, seed);
    bz::json j{{"nu_bound", b.nu_bound},
               {"nu_numeric", b.nu_numeric},
               {"contraction_ok", b.contraction_ok},
               {"theta_integral_closed", b.theta_integral_closed},
               {"theta_integral_quadrature", b.theta_integral_quadrature}};
    if (b.contraction_ok) {
      j["r_max"] = b.r_max;
      j["eps_max"] = b.eps_max;
      j["eps_positivity"] = b.eps_positivity;
    }
    if (b.mu_available) {
      j["mu_bound"] = b.mu_bound;
      j["mu_numeric"] = b.mu_numeric;
      j["mu_sharp"] = b.mu_sharp;
    }
    const std::string s = j.dump();
    char* buf = new char[s.size() + 1];
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *json_out = buf;
  });
}

void bz_string_free(char* s) { delete[] s; }

}  // extern "C"
