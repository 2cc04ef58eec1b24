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

#ifndef MFCTL_PIPELINES_HPP
#define MFCTL_PIPELINES_HPP

#include "mfctl/config.hpp"
#include "mfctl/population.hpp"
#include "mfctl/verify.hpp"

namespace mfctl {

/// Writes linear_model.csv, freq_response.csv, zeros.csv and report.txt to
/// out_dir. Returns the exit code: 0 all applicable identities hold, 2 PR
/// violated on a reversible model, 3 B cross-check failed.
int run_analyze(const ModelInstance &model, int omega_points,
                double pr_tol, const std::string &out_dir);

/// Writes sweep.csv (zeta, lambda, v_1..v_d) over a uniform zeta grid.
void run_sweep(const ModelInstance &model, double zeta_min, double zeta_max,
               int points, const std::string &out_dir);

struct SimulateMfOptions {
  std::string signal = "const:0";
  double t_end = 10.0;
  double dt = 0.0;        // <= 0: 0.01 / spectral gap
  double output_dt = 0.0; // <= 0: every step
  bool emit_linearized = false;
};

/// Writes meanfield.csv (t, y, mu_1..mu_d, zeta) and optionally
/// linearized.csv (t, gamma, phi_1..phi_d).
void run_simulate_mf(const ModelInstance &model,
                     const SimulateMfOptions &options,
                     const std::string &out_dir);

struct SimulateAgentsOptions {
  std::string signal = "const:0";
  long n_agents = 1000;
  std::uint64_t seed = 0;
  double t_end = 10.0;
  double output_dt = 0.1;
  int threads = 1;
  bool proportional_init = false;
};

/// Writes population.csv (t, agg_output, empirical_1..empirical_d) and
/// population_meta.txt (N, seed, Theta, wall time).
void run_simulate_agents(const ModelInstance &model,
                         const SimulateAgentsOptions &options,
                         const std::string &out_dir);

struct VerifyRunOptions {
  VerifyOptions checks;
  // When no model is given: a suite of random reversible instances.
  int random_dim = 0;
  int random_count = 0;
  std::uint64_t seed = 1;
};

/// Runs the consolidated residual table on the given model and/or random
/// suite; writes report.txt. Returns the report exit code.
int run_verify(const ModelInstance *model, const VerifyRunOptions &options,
               const std::string &out_dir);

struct CounterexampleOptions {
  int dim = 8;
  int budget = 500;
  std::uint64_t seed = 7;
};

/// Runs the non-reversible search; writes counterexample_rates.csv,
/// counterexample_utility.csv, zeros.csv and report.txt. Always exits 0;
/// SearchExhausted is a report line, not a failure.
int run_counterexample(const CounterexampleOptions &options,
                       const std::string &out_dir);

} // namespace mfctl

#endif
