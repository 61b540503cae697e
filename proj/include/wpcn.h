/* wpcn: harvest-then-transmit wireless powered network simulator.
 *
 * C interface to the allocation and simulation core. All objects are opaque
 * handles; every fallible call returns a wpcn_status code, with a
 * thread-local detail message available from wpcn_last_error().
 */
#ifndef WPCN_H
#define WPCN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define WPCN_API __declspec(dllexport)
#else
#define WPCN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wpcn_status {
  WPCN_OK = 0,
  WPCN_ERR_ARG = 1,         /* invalid argument or config value */
  WPCN_ERR_DOMAIN = 2,      /* input outside a function's domain */
  WPCN_ERR_CONVERGENCE = 3, /* iteration failed to meet its residual target */
  WPCN_ERR_IO = 4,          /* file could not be read or written */
  WPCN_ERR_INTERNAL = 5
} wpcn_status;

typedef enum wpcn_mode {
  WPCN_MODE_PF = 0,      /* proportional-fair weights, updated online */
  WPCN_MODE_MAXSUM = 1   /* all weights pinned to 1 */
} wpcn_mode;

typedef struct wpcn_config wpcn_config;
typedef struct wpcn_result wpcn_result;

WPCN_API const char* wpcn_version(void);
WPCN_API const char* wpcn_status_str(int status);
/* Detail message from the most recent failing call on this thread. */
WPCN_API const char* wpcn_last_error(void);

/* ---- configuration ----------------------------------------------------- */

/* num_users users with library defaults (10 m distance, eta 0.5). */
WPCN_API wpcn_config* wpcn_config_create(int num_users);
/* Reference five-user network: distances 10/12.5/15/17/18.8 m, alpha 3,
 * 30 dB loss at 1 m, N_0 = 1e-12 W, P_avg = 1 W, P_max = 5 W, p_c = 0. */
WPCN_API wpcn_config* wpcn_config_default(void);
/* Flat "key = value" file; returns NULL on error. */
WPCN_API wpcn_config* wpcn_config_load(const char* path);
WPCN_API wpcn_config* wpcn_config_clone(const wpcn_config* config);
WPCN_API void wpcn_config_free(wpcn_config* config);

/* Keys: K, eta, p_c, P_max, P_avg, N_0, T, distances, alpha, ref_loss,
 * gamma0. Lists are comma-separated. */
WPCN_API int wpcn_config_set(wpcn_config* config, const char* key, const char* value);
WPCN_API int wpcn_config_get(const wpcn_config* config, const char* key,
                             char* buffer, size_t size);
/* Scalar keys only. */
WPCN_API int wpcn_config_get_real(const wpcn_config* config, const char* key,
                                  double* value);
WPCN_API int wpcn_config_users(const wpcn_config* config);
WPCN_API int wpcn_config_validate(const wpcn_config* config);

/* ---- simulation --------------------------------------------------------- */

/* Online protocol over `epochs` fading blocks drawn from `seed`. Set
 * record_trace to keep the per-epoch trace for CSV export. */
WPCN_API int wpcn_run(const wpcn_config* config, int mode, int64_t epochs,
                      uint64_t seed, int record_trace, wpcn_result** result);

/* Fixed dual price, fixed weights (rbar may be NULL for all-ones). */
WPCN_API int wpcn_run_fixed_lambda(const wpcn_config* config, int64_t epochs,
                                   uint64_t seed, double lambda,
                                   const double* rbar, int record_trace,
                                   wpcn_result** result);

/* Dual price meeting the average power budget within 0.1% on the trace
 * drawn from `seed` (rbar may be NULL for all-ones). */
WPCN_API int wpcn_calibrate_lambda(const wpcn_config* config, int64_t epochs,
                                   uint64_t seed, const double* rbar,
                                   double* lambda);

/* Converged proportional-fair operating point on the trace drawn from
 * `seed`: alternates budget calibration with weight updates for
 * `weight_rounds` rounds. Writes the price and, when rbar is non-NULL, the
 * K fixed-point weights. */
WPCN_API int wpcn_calibrate_pf_lambda(const wpcn_config* config, int64_t epochs,
                                      uint64_t seed, int weight_rounds,
                                      double* lambda, double* rbar);

/* ---- results ------------------------------------------------------------ */

WPCN_API void wpcn_result_free(wpcn_result* result);
WPCN_API int64_t wpcn_result_epochs(const wpcn_result* result);
WPCN_API int wpcn_result_mode(const wpcn_result* result);
WPCN_API double wpcn_result_sum_rate(const wpcn_result* result);
WPCN_API double wpcn_result_jain(const wpcn_result* result);
/* 1 when every user rate is zero and the Jain index is reported as 0. */
WPCN_API int wpcn_result_jain_degenerate(const wpcn_result* result);
WPCN_API double wpcn_result_avg_bs_power(const wpcn_result* result);
WPCN_API double wpcn_result_user_rate(const wpcn_result* result, int user);
/* "epoch,p0,tau0,tau_1..tau_K,r_1..r_K,lambda_hat", one row per epoch. */
WPCN_API int wpcn_result_write_trace_csv(const wpcn_result* result, const char* path);

/* ---- channel traces and scalar kernels ---------------------------------- */

/* "epoch,x_1,...,x_K" rows for the fading trace drawn from `seed`. */
WPCN_API int wpcn_write_channel_csv(const wpcn_config* config, int64_t epochs,
                                    uint64_t seed, const char* path);

/* Principal-branch Lambert W. */
WPCN_API int wpcn_lambert_w0(double x, double* w);
/* z > c solving log(1-c+z) - z/(1-c+z) = b. */
WPCN_API int wpcn_solve_z(double c, double b, double* z);

/* ---- verification ------------------------------------------------------- */

/* Numerical self-check suite (closed form vs. brute force, first-order
 * optimality, residual sweeps). Returns the number of failed checks;
 * verbose prints one line per check. */
WPCN_API int wpcn_verify(uint64_t seed, int instances, int verbose);

#ifdef __cplusplus
}
#endif

#endif /* WPCN_H */
