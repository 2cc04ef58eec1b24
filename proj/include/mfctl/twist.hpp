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

#ifndef MFCTL_TWIST_HPP
#define MFCTL_TWIST_HPP

#include <utility>

#include "mfctl/markov.hpp"

namespace mfctl {

/// The zeta-parameterized triple (Lambda_z, v_z, D_z): Perron-Frobenius
/// eigenpair of D + zeta*diag(𝒰) and the proper generator obtained from it
/// by similarity and shift. D_0 = D, Lambda_0 = 0, v_0 = 1.
struct TwistedFamily {
  GeneratorMatrix base;
  UtilityFunction util;
  double zeta = 0.0;
  double eigenvalue = 0.0;
  Eigen::VectorXd eigenvector; // strictly positive, v(x1) = 1
  GeneratorMatrix twisted;
};

/// Maximal-real-part eigenpair of D + zeta*diag(𝒰). The eigenvalue is real
/// and simple for an irreducible generator; the eigenvector is strictly
/// positive and normalized so its first component is 1.
std::pair<double, Eigen::VectorXd>
pf_eigenpair(const GeneratorMatrix &gen, const UtilityFunction &util,
             double zeta);

TwistedFamily twisted_generator(const GeneratorMatrix &gen,
                                const UtilityFunction &util, double zeta);

/// Cumulative log-moment generating function
/// log E_x[exp(zeta * int_0^T 𝒰(X_t) dt)], computed as the log of
/// component x of exp(T(D + zeta*diag(𝒰))) * 1 with overflow-safe
/// renormalized squaring.
double lambda_finite_horizon(const GeneratorMatrix &gen,
                             const UtilityFunction &util, double zeta,
                             double t_horizon, int state);

/// T-stage welfare of the infinite-horizon-optimal twisted process:
/// T*Lambda_z - (E[log v(X_T)] - log v(x)), expectation under the twisted
/// semigroup started from `state`.
double welfare_of_twisted(const GeneratorMatrix &gen,
                          const UtilityFunction &util, double zeta,
                          double t_horizon, int state);

struct DerivativeCheck {
  double finite_difference = 0.0;
  double analytic = 0.0;
};

/// Central-difference d(Lambda_z)/dz at z = 0 vs. the stationary mean of 𝒰.
DerivativeCheck lmgf_derivative_check(const GeneratorMatrix &gen,
                                      const StationaryDistribution &pi,
                                      const UtilityFunction &util,
                                      double h = 1e-5);

struct VectorDerivativeCheck {
  Eigen::VectorXd finite_difference;
  Eigen::VectorXd analytic; // the Poisson solution h0
};

/// Central-difference d(v_z)/dz at z = 0 vs. the Poisson solution h0.
VectorDerivativeCheck
eigenvector_derivative_check(const GeneratorMatrix &gen,
                             const StationaryDistribution &pi,
                             const UtilityFunction &util, double h = 1e-5);

/// Precomputed D_zeta matrices on a uniform zeta grid with linear
/// interpolation in between. Immutable once built; shared by the agent
/// simulator and long mean-field runs.
class TwistTable {
public:
  TwistTable(const GeneratorMatrix &gen, const UtilityFunction &util,
             double zeta_min, double zeta_max, double spacing = 1e-3);

  Eigen::MatrixXd rates_at(double zeta) const;
  /// Writes the interpolated rates into `out` without allocating.
  void rates_at(double zeta, Eigen::MatrixXd &out) const;

  double zeta_min() const { return zeta_min_; }
  double zeta_max() const { return zeta_max_; }
  /// Largest |diagonal entry| over all table nodes; interpolated values
  /// never exceed it.
  double max_exit_rate() const { return max_exit_rate_; }

private:
  double zeta_min_, zeta_max_, spacing_;
  std::vector<Eigen::MatrixXd> nodes_;
  double max_exit_rate_ = 0.0;
};

} // namespace mfctl

#endif
