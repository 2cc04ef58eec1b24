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

#ifndef MFCTL_POPULATION_HPP
#define MFCTL_POPULATION_HPP

#include <cstdint>

#include "mfctl/meanfield.hpp"

namespace mfctl {

/// Empirical distribution and aggregate output of N independent agents
/// driven by the common broadcast signal.
struct PopulationTrace {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> empirical; // exact rationals with denominator N
  std::vector<double> agg_output;
  long n_agents = 0;
  std::uint64_t seed = 0;
  double theta = 0.0; // dominating rate used by the thinning sampler
};

struct PopulationOptions {
  long n_agents = 1;
  std::uint64_t seed = 0;
  double t_end = 1.0;
  double output_dt = 0.1;
  int threads = 1;
  /// Largest-remainder deterministic assignment instead of i.i.d. draws.
  bool proportional_init = false;
};

/// Each agent is a time-inhomogeneous CTMC with generator D_{zeta_t},
/// sampled exactly by uniformization: a Poisson stream of candidate events
/// at the dominating rate Theta = 1.05 * sup_t,x |D_{zeta_t}(x,x)|, thinned
/// by the instantaneous rates. Per-agent counter-based RNG streams make the
/// trace a function of (seed, N) alone, independent of thread count.
PopulationTrace simulate_population(const GeneratorMatrix &gen,
                                    const UtilityFunction &util,
                                    const ControlSignal &signal,
                                    const Eigen::VectorXd &mu0,
                                    const PopulationOptions &options,
                                    const TwistTable *table = nullptr);

struct MeanFieldGap {
  double sup_l1 = 0.0;     // sup_t || empirical - mu_t ||_1
  double sup_output = 0.0; // sup_t |agg_output - y_t|
};

MeanFieldGap meanfield_gap(const PopulationTrace &trace,
                           const MeanFieldTrajectory &mf);

} // namespace mfctl

#endif
