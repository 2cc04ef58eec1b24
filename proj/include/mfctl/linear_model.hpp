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

#ifndef MFCTL_LINEAR_MODEL_HPP
#define MFCTL_LINEAR_MODEL_HPP

#include <complex>
#include <functional>
#include <optional>

#include "mfctl/markov.hpp"

namespace mfctl {

/// Linear state-space model (A, B, C) of the mean-field dynamics around
/// zeta = 0: A = D^T, C_i = ũ(x^i), B from the derivative of the twisted
/// generator family. B is computed twice (closed form via Poisson's
/// equation and the time-reversed generator, and by central differences
/// of zeta -> D_zeta) and cross-validated.
struct LinearModel {
  Eigen::MatrixXd a; // = D^T
  Eigen::VectorXd b; // = b_closed_form
  Eigen::VectorXd c; // centered utility
  double baseline = 0.0;
  Eigen::VectorXd b_closed_form;
  Eigen::VectorXd b_finite_diff;

  // Kept so the transfer function can be evaluated by a D-side solve.
  GeneratorMatrix generator;
  StationaryDistribution pi;
  UtilityFunction util;
};

LinearModel build_linear_model(const GeneratorMatrix &gen,
                               const StationaryDistribution &pi,
                               const UtilityFunction &util,
                               double fd_step = 1e-5,
                               double cross_check_tol = 1e-5);

/// G(s) = C (sI - A)^{-1} B, evaluated as B^T (sI - D)^{-1} C^T with a
/// single linear solve. s = 0 uses the pi-centered subspace (C is
/// centered, so the limit is finite).
std::complex<double> transfer_function(const LinearModel &model,
                                       std::complex<double> s);

struct FrequencyResponse {
  std::vector<double> omegas;
  std::vector<std::complex<double>> g;
  std::vector<double> psd;
  std::vector<double> re_gap; // Re G(jw) - PSD_Y(w)
};

/// 400 log-spaced points over [gap*1e-3, gap*1e3]; mirrored adds the
/// negated frequencies (for conjugate-symmetry checks).
std::vector<double> default_omega_grid(const GeneratorMatrix &gen,
                                       int points = 400,
                                       bool mirrored = false);

FrequencyResponse frequency_response(const LinearModel &model,
                                     const std::vector<double> &omega_grid);

/// Finite transmission zeros of (A, B, C) from the Rosenbrock pencil
/// [[A - sI, B], [C, 0]], sorted by real part. Note the mode along pi is
/// unobservable (C pi = 0), so a decoupling zero at s = 0 always appears.
std::vector<std::complex<double>> transmission_zeros(const LinearModel &model);

struct PositiveRealReport {
  bool is_pr = false;
  double min_re_g = 0.0;
  double argmin_omega = 0.0;
  double max_re_gap = 0.0;
};

PositiveRealReport positive_real_check(const FrequencyResponse &fr,
                                       double tol);

/// A candidate nominal model for the counterexample search.
struct SearchInstance {
  GeneratorMatrix gen;
  Eigen::VectorXd utility;
};

using InstanceFamily = std::function<SearchInstance(std::uint64_t draw_seed)>;

/// Directed one-way ring with log-uniform rates, 1-3 chord edges and a
/// permuted ramp utility. Echoes the scale of the a = c = 10, b = 1
/// non-reversible example; strongly non-reversible by construction.
InstanceFamily directed_cycle_family(int dim);

struct CounterexampleResult {
  bool found_pr_violation = false;
  bool found_rhp_zero = false;
  std::optional<SearchInstance> best; // minimizer of min_w Re G(jw)
  double best_min_re_g = 0.0;
  double best_argmin_omega = 0.0;
  std::vector<std::complex<double>> best_zeros;
  std::optional<SearchInstance> rhp_zero_instance;
  std::complex<double> rhp_zero{0.0, 0.0};
  int draws = 0;
};

/// Draws `budget` instances from `family`, tracking the one that minimizes
/// min_w Re G(jw) and the first with a strict right-half-plane zero.
/// Reversible draws are skipped (reversibility would forbid a
/// violation). No violation found is reported, not thrown.
CounterexampleResult counterexample_search(const InstanceFamily &family,
                                           int budget, std::uint64_t seed);

} // namespace mfctl

#endif
