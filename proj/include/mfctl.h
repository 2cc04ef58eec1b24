/*
 * Copyright 2026 the mfctl authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the mfctl library: KL-optimal control of finite-state
 * Markov processes, the induced mean-field input-output model, its
 * linearization and frequency-domain identities, and an N-agent simulator.
 *
 * All functions return a status code; 0 is success. On failure a
 * thread-local message is available via mfctl_last_error(). Handles are
 * opaque and freed with mfctl_model_free(). Array arguments are row-major,
 * caller-allocated, length d or d*d with d = mfctl_model_dim().
 */

#ifndef MFCTL_H
#define MFCTL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mfctl_status {
  MFCTL_OK = 0,
  /* A model-identity check failed (e.g. positive realness on a
     reversible model). Matches CLI exit code 2. */
  MFCTL_ERR_IDENTITY = 2,
  /* Two independent computations of the same quantity disagree;
     indicates an internal bug. Matches CLI exit code 3. */
  MFCTL_ERR_CROSS_CHECK = 3,
  /* Bad input: malformed config, invalid generator, out-of-range
     argument. Matches CLI exit code 4. */
  MFCTL_ERR_INPUT = 4,
  /* Unexpected numerical failure. */
  MFCTL_ERR_INTERNAL = 5
} mfctl_status;

typedef struct mfctl_model mfctl_model;

/* Thread-local message describing the most recent failure. */
const char *mfctl_last_error(void);

/* ---- model construction -------------------------------------------- */

/* rates: d*d row-major generator (off-diagonals >= 0, zero row sums,
   irreducible); utility: length d; labels: optional (NULL for x1..xd). */
mfctl_status mfctl_model_create(int dim, const double *rates,
                                const double *utility,
                                const char *const *labels, mfctl_model **out);

/* Reads a JSON or key-value model config file. */
mfctl_status mfctl_model_load(const char *path, mfctl_model **out);

/* Deterministic reversible test instance with a random utility. */
mfctl_status mfctl_model_random_reversible(int dim, uint64_t seed,
                                           double edge_density,
                                           mfctl_model **out);

void mfctl_model_free(mfctl_model *model);

int mfctl_model_dim(const mfctl_model *model);
const char *mfctl_model_label(const mfctl_model *model, int state);
mfctl_status mfctl_model_rates(const mfctl_model *model, double *rates_out);
mfctl_status mfctl_model_utility(const mfctl_model *model, double *util_out);

/* ---- numerics ------------------------------------------------------- */

mfctl_status mfctl_stationary(const mfctl_model *model, double *pi_out);

/* tol <= 0 selects the scale-relative default. */
mfctl_status mfctl_reversibility(const mfctl_model *model, double tol,
                                 int *reversible_out, double *violation_out);

mfctl_status mfctl_spectral_gap(const mfctl_model *model, double *gap_out);

/* Solution of D h0 = -centered utility with h0(x1) = 0. */
mfctl_status mfctl_poisson(const mfctl_model *model, double *h0_out);

mfctl_status mfctl_autocovariance(const mfctl_model *model, double t,
                                  double *out);

mfctl_status mfctl_psd(const mfctl_model *model, double omega, double *out);

/* Perron-Frobenius eigenpair of D + zeta*diag(utility); v_out length d,
   normalized so v[0] = 1. Either output may be NULL. */
mfctl_status mfctl_pf_eigenpair(const mfctl_model *model, double zeta,
                                double *lambda_out, double *v_out);

/* The twisted generator D_zeta, d*d row-major. */
mfctl_status mfctl_twisted_rates(const mfctl_model *model, double zeta,
                                 double *rates_out);

/* Linearized model: a_out d*d (= D^T), b_out and c_out length d,
   baseline_out scalar. Any output may be NULL. */
mfctl_status mfctl_linear_model(const mfctl_model *model, double *a_out,
                                double *b_out, double *c_out,
                                double *baseline_out);

/* G(s) at s = re_s + j*im_s. */
mfctl_status mfctl_transfer(const mfctl_model *model, double re_s,
                            double im_s, double *re_g_out, double *im_g_out);

/* ---- pipelines (write CSV outputs to out_dir) ----------------------- */

typedef struct mfctl_analyze_opts {
  int omega_points; /* <= 0: 400 */
  double pr_tol;    /* <= 0: 1e-10 */
} mfctl_analyze_opts;

mfctl_status mfctl_analyze(const mfctl_model *model,
                           const mfctl_analyze_opts *opts,
                           const char *out_dir);

mfctl_status mfctl_sweep(const mfctl_model *model, double zeta_min,
                         double zeta_max, int points, const char *out_dir);

typedef struct mfctl_simulate_mf_opts {
  const char *signal; /* "const:c" | "sin:amp,omega[,offset]" | "pwc:..." */
  double t_end;
  double dt;        /* <= 0: 0.01 / spectral gap */
  double output_dt; /* <= 0: every step */
  int emit_linearized;
} mfctl_simulate_mf_opts;

mfctl_status mfctl_simulate_mf(const mfctl_model *model,
                               const mfctl_simulate_mf_opts *opts,
                               const char *out_dir);

typedef struct mfctl_simulate_agents_opts {
  const char *signal;
  long n_agents;
  uint64_t seed;
  double t_end;
  double output_dt;
  int threads; /* <= 0: 1 */
  int proportional_init;
} mfctl_simulate_agents_opts;

mfctl_status mfctl_simulate_agents(const mfctl_model *model,
                                   const mfctl_simulate_agents_opts *opts,
                                   const char *out_dir);

typedef struct mfctl_verify_opts {
  /* Random reversible suite; count 0 disables (then model is required). */
  int random_dim;
  int random_count;
  uint64_t seed;
  double zeta_min, zeta_max; /* zeta grid, defaults [-2, 2] when equal */
  int zeta_points;           /* <= 0: 41 */
  int omega_points;          /* <= 0: 400 */
} mfctl_verify_opts;

/* model may be NULL when a random suite is requested. Returns
   MFCTL_ERR_IDENTITY / MFCTL_ERR_CROSS_CHECK when checks fail. */
mfctl_status mfctl_verify(const mfctl_model *model,
                          const mfctl_verify_opts *opts, const char *out_dir);

typedef struct mfctl_counterexample_opts {
  int dim;    /* <= 0: 8 */
  int budget; /* <= 0: 500 */
  uint64_t seed;
} mfctl_counterexample_opts;

mfctl_status mfctl_counterexample(const mfctl_counterexample_opts *opts,
                                  const char *out_dir);

#ifdef __cplusplus
}
#endif

#endif /* MFCTL_H */
