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

#ifndef MFCTL_MEANFIELD_HPP
#define MFCTL_MEANFIELD_HPP

#include "mfctl/linear_model.hpp"
#include "mfctl/markov.hpp"
#include "mfctl/signal.hpp"
#include "mfctl/twist.hpp"

namespace mfctl {

/// Time-sampled solution of the nonlinear state equation
/// d(mu_t)/dt = mu_t D_{zeta_t} with output y_t = sum 𝒰(x) mu_t(x).
struct MeanFieldTrajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> mus;
  std::vector<double> outputs;
  std::vector<double> zetas;
};

/// Classical RK4 with fixed step dt; the twisted generator is rebuilt at
/// every stage time (or interpolated from `table` when given). Each step
/// clamps negatives at -1e-10 and renormalizes; drift beyond 1e-6 in one
/// step raises StepRejected. States are recorded every output_dt
/// (every accepted step when output_dt <= 0).
MeanFieldTrajectory integrate_meanfield(const GeneratorMatrix &gen,
                                        const UtilityFunction &util,
                                        const ControlSignal &signal,
                                        const Eigen::VectorXd &mu0,
                                        double t_end, double dt,
                                        double output_dt = 0.0,
                                        const TwistTable *table = nullptr);

struct LinearTrajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> phis;
  std::vector<double> gammas;
};

/// RK4 on dPhi/dt = A Phi + B zeta_t, gamma = C Phi.
LinearTrajectory integrate_linearized(const LinearModel &model,
                                      const ControlSignal &signal,
                                      const Eigen::VectorXd &phi0,
                                      double t_end, double dt,
                                      double output_dt = 0.0);

/// sup_t |(y_t - ybar) - gamma_t| for matched inputs zeta_t =
/// epsilon*sin(omega t), started at equilibrium. Quadratic in epsilon.
double linearization_error(const GeneratorMatrix &gen,
                           const StationaryDistribution &pi,
                           const UtilityFunction &util,
                           const LinearModel &model, double epsilon,
                           double omega, double t_end, double dt);

} // namespace mfctl

#endif
