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

#include "mfctl/meanfield.hpp"

#include <cmath>
#include <sstream>

namespace mfctl {

namespace {

void check_probability_vector(const Eigen::VectorXd &mu0, int d) {
  if (static_cast<int>(mu0.size()) != d)
    throw input_error("initial distribution length mismatch");
  if (mu0.minCoeff() < -1e-12 || std::abs(mu0.sum() - 1.0) > 1e-9)
    throw input_error("mu0 is not a probability vector");
}

int steps_per_record(double dt, double output_dt) {
  if (output_dt <= 0)
    return 1;
  const int k = static_cast<int>(std::lround(output_dt / dt));
  if (k < 1 || std::abs(k * dt - output_dt) > 1e-9 * std::max(1.0, output_dt))
    throw input_error("output_dt must be a multiple of dt");
  return k;
}

} // namespace

MeanFieldTrajectory integrate_meanfield(const GeneratorMatrix &gen,
                                        const UtilityFunction &util,
                                        const ControlSignal &signal,
                                        const Eigen::VectorXd &mu0,
                                        double t_end, double dt,
                                        double output_dt,
                                        const TwistTable *table) {
  const int d = gen.dim();
  if (dt <= 0 || t_end < 0)
    throw input_error("need dt > 0 and t_end >= 0");
  check_probability_vector(mu0, d);

  // Stage-time generator lookup. The exact path solves the eigenproblem at
  // each distinct zeta; a one-entry cache covers constant and
  // piecewise-constant signals.
  Eigen::MatrixXd cached_rates;
  double cached_zeta = std::nan("");
  Eigen::MatrixXd interp;
  auto rates_at = [&](double t) -> const Eigen::MatrixXd & {
    const double z = signal(t);
    if (table != nullptr) {
      table->rates_at(z, interp);
      return interp;
    }
    if (z != cached_zeta) {
      cached_rates = twisted_generator(gen, util, z).twisted.rates;
      cached_zeta = z;
    }
    return cached_rates;
  };

  const long n_steps = std::lround(std::ceil(t_end / dt - 1e-12));
  const int record_every = steps_per_record(dt, output_dt);

  MeanFieldTrajectory traj;
  Eigen::VectorXd mu = mu0;
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.mus.push_back(mu);
    traj.outputs.push_back(util.values.dot(mu));
    traj.zetas.push_back(signal(t));
  };
  record(0.0);

  Eigen::VectorXd k1(d), k2(d), k3(d), k4(d);
  for (long step = 0; step < n_steps; ++step) {
    const double t = step * dt;
    const double h = std::min(dt, t_end - t);
    // Row-vector ODE: mu' = mu * D_zeta.
    k1 = rates_at(t).transpose() * mu;
    k2 = rates_at(t + h / 2).transpose() * (mu + (h / 2) * k1);
    k3 = rates_at(t + h / 2).transpose() * (mu + (h / 2) * k2);
    k4 = rates_at(t + h).transpose() * (mu + h * k3);
    mu += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);

    double drift = std::abs(mu.sum() - 1.0);
    for (int i = 0; i < d; ++i)
      if (mu(i) < 0) {
        drift += -mu(i);
        mu(i) = 0.0;
      }
    if (drift > 1e-6) {
      std::ostringstream os;
      os << "StepRejected: renormalization drift " << drift << " at t = "
         << t + h << "; reduce dt";
      throw internal_error(os.str());
    }
    mu /= mu.sum();

    if ((step + 1) % record_every == 0 || step + 1 == n_steps)
      record(t + h);
  }
  return traj;
}

LinearTrajectory integrate_linearized(const LinearModel &model,
                                      const ControlSignal &signal,
                                      const Eigen::VectorXd &phi0,
                                      double t_end, double dt,
                                      double output_dt) {
  const int d = static_cast<int>(model.a.rows());
  if (dt <= 0 || t_end < 0)
    throw input_error("need dt > 0 and t_end >= 0");
  if (static_cast<int>(phi0.size()) != d)
    throw input_error("phi0 length mismatch");

  const long n_steps = std::lround(std::ceil(t_end / dt - 1e-12));
  const int record_every = steps_per_record(dt, output_dt);

  LinearTrajectory traj;
  Eigen::VectorXd phi = phi0;
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.phis.push_back(phi);
    traj.gammas.push_back(model.c.dot(phi));
  };
  record(0.0);

  auto f = [&](double t, const Eigen::VectorXd &x) {
    return (model.a * x + model.b * signal(t)).eval();
  };
  for (long step = 0; step < n_steps; ++step) {
    const double t = step * dt;
    const double h = std::min(dt, t_end - t);
    const Eigen::VectorXd k1 = f(t, phi);
    const Eigen::VectorXd k2 = f(t + h / 2, phi + (h / 2) * k1);
    const Eigen::VectorXd k3 = f(t + h / 2, phi + (h / 2) * k2);
    const Eigen::VectorXd k4 = f(t + h, phi + h * k3);
    phi += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    if ((step + 1) % record_every == 0 || step + 1 == n_steps)
      record(t + h);
  }
  return traj;
}

double linearization_error(const GeneratorMatrix &gen,
                           const StationaryDistribution &pi,
                           const UtilityFunction &util,
                           const LinearModel &model, double epsilon,
                           double omega, double t_end, double dt) {
  if (epsilon == 0.0)
    return 0.0;
  const ControlSignal signal = ControlSignal::sinusoid(epsilon, omega);
  const MeanFieldTrajectory mf =
      integrate_meanfield(gen, util, signal, pi.pi, t_end, dt);
  const LinearTrajectory lin = integrate_linearized(
      model, signal, Eigen::VectorXd::Zero(gen.dim()), t_end, dt);
  if (mf.times.size() != lin.times.size())
    throw internal_error("trajectory grids diverged");
  double sup = 0.0;
  for (std::size_t i = 0; i < mf.times.size(); ++i)
    sup = std::max(sup, std::abs((mf.outputs[i] - util.baseline) -
                                 lin.gammas[i]));
  return sup;
}

} // namespace mfctl
