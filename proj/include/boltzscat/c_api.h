#ifndef BOLTZSCAT_C_API_H
#define BOLTZSCAT_C_API_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bz_status {
  BZ_OK = 0,
  BZ_ERR_INVALID_ARGUMENT = 1,
  BZ_ERR_DOMAIN = 2,
  BZ_ERR_CONVERGENCE = 3,
  BZ_ERR_IO = 4,
  BZ_ERR_INTERNAL = 5
} bz_status;

typedef struct bz_maxwellian bz_maxwellian;

const char* bz_version(void);

/* Message of the last failed call on this thread ("" if none). */
const char* bz_last_error(void);

bz_status bz_set_threads(int n);

/* Runs one CLI subcommand ("validate", "bounds", "simulate", "scatter",
 * "wave-inverse", "fit", "report"). seed < 0 keeps the config seed.
 * config may be NULL for "report". *exit_code receives 0 (all assertions
 * pass), 2 (an assertion failed) or 1 (execution error). */
bz_status bz_run(const char* command, const char* config_path, const char* out_dir, int threads, int64_t seed,
                 int strict, int* exit_code);

/* B is row-major D x D; x0, v0 have length D. */
bz_status bz_maxwellian_create(int D, double m, double a, double b, double c, const double* B, const double* x0,
                               const double* v0, bz_maxwellian** out);
void bz_maxwellian_destroy(bz_maxwellian* M);
bz_status bz_maxwellian_eval(const bz_maxwellian* M, const double* v, const double* x, double t, double* out);
bz_status bz_maxwellian_entropy(const bz_maxwellian* M, double* out);
/* Writes invariant_count(D) values; *count receives the length. */
bz_status bz_maxwellian_invariants(const bz_maxwellian* M, double* out, size_t capacity, size_t* count);

/* Dispersion constants for the constant angular kernel bhat = bhat_const,
 * as a JSON object. Free the string with bz_string_free. */
bz_status bz_bounds_json(const bz_maxwellian* M, double beta, double bhat_const, int samples, uint64_t seed,
                         char** json_out);
void bz_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
