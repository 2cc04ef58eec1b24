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

#ifndef MFCTL_MARKOV_HPP
#define MFCTL_MARKOV_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "mfctl/error.hpp"

namespace mfctl {

// Rates below this magnitude are treated as structural zeros when building
// the support graph.
inline constexpr double kStructuralZero = 1e-14;

/// Validated rate matrix of an irreducible finite-state CTMC.
/// Off-diagonals are non-negative, rows sum to zero, and the support graph
/// is strongly connected.
struct GeneratorMatrix {
  Eigen::MatrixXd rates;
  std::vector<std::string> state_labels;

  int dim() const { return static_cast<int>(rates.rows()); }
};

struct StationaryDistribution {
  Eigen::VectorXd pi;
};

/// Utility 𝒰 together with its stationary mean and the centered values
/// used as the output map of the linearized model.
struct UtilityFunction {
  Eigen::VectorXd values;
  Eigen::VectorXd centered; // values - baseline
  double baseline = 0.0;    // sum_i pi_i * values_i
};

GeneratorMatrix validate_generator(const Eigen::MatrixXd &raw,
                                   std::vector<std::string> labels = {});

StationaryDistribution stationary_distribution(const GeneratorMatrix &gen);

UtilityFunction make_utility(const Eigen::VectorXd &values,
                             const StationaryDistribution &pi);

struct ReversibilityReport {
  bool reversible = false;
  double max_violation = 0.0;
  double tol = 0.0;
};

/// Default tolerance: 1e-9 relative to max_ij pi_i |D(i,j)|.
double default_reversibility_tol(const GeneratorMatrix &gen,
                                 const StationaryDistribution &pi);

ReversibilityReport is_reversible(const GeneratorMatrix &gen,
                                  const StationaryDistribution &pi,
                                  double tol = -1.0);

/// Test-instance factory for reversible chains: D(i,j) = w(i,j)/pi_i with a
/// random symmetric non-negative w whose support graph is connected, so
/// detailed balance holds by construction.
GeneratorMatrix random_reversible_generator(const Eigen::VectorXd &pi,
                                            std::uint64_t seed,
                                            double edge_density = 1.0);

/// Generator of the time-reversed process, D*(i,j) = pi_j D(j,i) / pi_i.
GeneratorMatrix time_reversal(const GeneratorMatrix &gen,
                              const StationaryDistribution &pi);

/// Transition semigroup P^t = exp(tD). Entries are clamped to [0, inf) on
/// output; rows sum to 1 up to roundoff.
Eigen::MatrixXd semigroup(const GeneratorMatrix &gen, double t);

/// exp(tM) * v without forming exp(tM) when the dimension is large.
Eigen::VectorXd expm_apply(const Eigen::MatrixXd &m, double t,
                           const Eigen::VectorXd &v);

/// |largest non-zero real part| of the spectrum of D, i.e. the rate of the
/// slowest decaying mode.
double spectral_gap(const GeneratorMatrix &gen);

/// Solves (sI - D) x = rhs. For s = 0 the system is singular and rhs must
/// be pi-centered; the solution returned is the unique one with pi.x = 0,
/// obtained from the augmented system [-D; pi^T].
Eigen::VectorXcd resolvent_solve(const GeneratorMatrix &gen,
                                 const StationaryDistribution &pi,
                                 std::complex<double> s,
                                 const Eigen::VectorXcd &rhs);

/// Poisson's equation D h = -centered(util), normalized so h(x1) = 0.
Eigen::VectorXd poisson_solve(const GeneratorMatrix &gen,
                              const StationaryDistribution &pi,
                              const UtilityFunction &util);

/// Stationary autocovariance E_pi[ũ(X_0) ũ(X_t)] of the output Y = 𝒰(X).
double autocovariance(const GeneratorMatrix &gen,
                      const StationaryDistribution &pi,
                      const UtilityFunction &util, double t);

/// Two-sided power spectral density of the stationary output,
/// PSD_Y(w) = 2 Re sum_i pi_i ũ_i [R_{jw} ũ]_i.
double psd(const GeneratorMatrix &gen, const StationaryDistribution &pi,
           const UtilityFunction &util, double omega);

} // namespace mfctl

#endif
