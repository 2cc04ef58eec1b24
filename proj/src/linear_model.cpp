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

#include "mfctl/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mfctl/rng.hpp"
#include "mfctl/twist.hpp"

namespace mfctl {

LinearModel build_linear_model(const GeneratorMatrix &gen,
                               const StationaryDistribution &pi,
                               const UtilityFunction &util, double fd_step,
                               double cross_check_tol) {
  const int d = gen.dim();
  LinearModel model;
  model.a = gen.rates.transpose();
  model.c = util.centered;
  model.baseline = util.baseline;
  model.generator = gen;
  model.pi = pi;
  model.util = util;

  // Closed form: B_i = -pi_i [ (D* h0)_i + (D h0)_i ].
  const Eigen::VectorXd h0 = poisson_solve(gen, pi, util);
  const GeneratorMatrix rev = time_reversal(gen, pi);
  model.b_closed_form =
      -(pi.pi.array() * (rev.rates * h0 + gen.rates * h0).array()).matrix();

  // Finite differences of the twisted family, contracted against pi:
  // B_j = sum_i pi_i dD_zeta(i,j)/dzeta at zeta = 0.
  const Eigen::MatrixXd dp = twisted_generator(gen, util, fd_step).twisted.rates;
  const Eigen::MatrixXd dm = twisted_generator(gen, util, -fd_step).twisted.rates;
  const Eigen::MatrixXd deriv = (dp - dm) / (2.0 * fd_step);
  model.b_finite_diff = deriv.transpose() * pi.pi;

  const double gap =
      (model.b_closed_form - model.b_finite_diff).cwiseAbs().maxCoeff();
  if (gap > cross_check_tol) {
    std::ostringstream os;
    os << "CrossCheckFailure: closed-form and finite-difference B differ by "
       << gap;
    throw cross_check_error(os.str());
  }

  model.b = model.b_closed_form;
  return model;
}

std::complex<double> transfer_function(const LinearModel &model,
                                       std::complex<double> s) {
  const Eigen::VectorXcd x =
      resolvent_solve(model.generator, model.pi, s,
                      model.c.cast<std::complex<double>>());
  return model.b.cast<std::complex<double>>().conjugate().dot(x);
}

std::vector<double> default_omega_grid(const GeneratorMatrix &gen, int points,
                                       bool mirrored) {
  const double gap = spectral_gap(gen);
  const double lo = std::log10(gap * 1e-3);
  const double hi = std::log10(gap * 1e3);
  std::vector<double> grid;
  grid.reserve(mirrored ? 2 * points : points);
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.5 : double(i) / (points - 1);
    grid.push_back(std::pow(10.0, lo + t * (hi - lo)));
  }
  if (mirrored) {
    std::vector<double> full;
    full.reserve(2 * points);
    for (auto it = grid.rbegin(); it != grid.rend(); ++it)
      full.push_back(-*it);
    full.insert(full.end(), grid.begin(), grid.end());
    return full;
  }
  return grid;
}

FrequencyResponse frequency_response(const LinearModel &model,
                                     const std::vector<double> &omega_grid) {
  FrequencyResponse fr;
  fr.omegas = omega_grid;
  fr.g.reserve(omega_grid.size());
  fr.psd.reserve(omega_grid.size());
  fr.re_gap.reserve(omega_grid.size());
  for (const double w : omega_grid) {
    const std::complex<double> g = transfer_function(model, {0.0, w});
    const double s = psd(model.generator, model.pi, model.util, w);
    fr.g.push_back(g);
    fr.psd.push_back(s);
    fr.re_gap.push_back(g.real() - s);
  }
  return fr;
}

std::vector<std::complex<double>> transmission_zeros(const LinearModel &model) {
  const int d = static_cast<int>(model.a.rows());
  if (model.b.norm() < 1e-12 || model.c.norm() < 1e-12)
    throw input_error("DegenerateSystem: B or C is numerically zero");

  Eigen::MatrixXd m0 = Eigen::MatrixXd::Zero(d + 1, d + 1);
  m0.topLeftCorner(d, d) = model.a;
  m0.topRightCorner(d, 1) = model.b;
  m0.bottomLeftCorner(1, d) = model.c.transpose();
  Eigen::MatrixXd m1 = Eigen::MatrixXd::Zero(d + 1, d + 1);
  m1.topLeftCorner(d, d).setIdentity();

  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> solver(m0, m1, false);
  if (solver.info() != Eigen::Success)
    throw internal_error("generalized eigensolver failed on zero pencil");

  std::vector<std::complex<double>> zeros;
  for (int i = 0; i <= d; ++i) {
    const std::complex<double> alpha = solver.alphas()(i);
    const double beta = solver.betas()(i);
    if (std::abs(beta) < 1e-300)
      continue; // zero at infinity
    const std::complex<double> z = alpha / beta;
    if (std::abs(z) >= 1e12)
      continue;
    zeros.push_back(z);
  }
  std::sort(zeros.begin(), zeros.end(),
            [](const std::complex<double> &a, const std::complex<double> &b) {
              return a.real() != b.real() ? a.real() < b.real()
                                          : a.imag() < b.imag();
            });
  return zeros;
}

PositiveRealReport positive_real_check(const FrequencyResponse &fr,
                                       double tol) {
  PositiveRealReport report;
  if (fr.omegas.empty())
    throw input_error("empty frequency grid");
  report.min_re_g = fr.g[0].real();
  report.argmin_omega = fr.omegas[0];
  for (std::size_t i = 0; i < fr.omegas.size(); ++i) {
    if (fr.g[i].real() < report.min_re_g) {
      report.min_re_g = fr.g[i].real();
      report.argmin_omega = fr.omegas[i];
    }
    report.max_re_gap = std::max(report.max_re_gap, std::abs(fr.re_gap[i]));
  }
  report.is_pr = report.min_re_g >= -tol;
  return report;
}

InstanceFamily directed_cycle_family(int dim) {
  if (dim < 3)
    throw input_error("directed cycle family needs at least 3 states");
  return [dim](std::uint64_t draw_seed) {
    Rng rng(draw_seed, 0xc1c1eULL);
    const int d = dim;
    Eigen::MatrixXd rates = Eigen::MatrixXd::Zero(d, d);
    // One-way ring with rates spread over ~2 decades around a rate
    // scale of 10.
    for (int i = 0; i < d; ++i)
      rates(i, (i + 1) % d) = std::pow(10.0, rng.uniform(-0.5, 1.5));
    const int chords = 1 + static_cast<int>(rng.uniform_index(3));
    for (int k = 0; k < chords; ++k) {
      int i = static_cast<int>(rng.uniform_index(d));
      int j = static_cast<int>(rng.uniform_index(d));
      if (i == j)
        j = (j + 1) % d;
      rates(i, j) += std::pow(10.0, rng.uniform(-0.5, 1.5));
    }
    rates.diagonal().setZero();
    for (int i = 0; i < d; ++i)
      rates(i, i) = -rates.row(i).sum();

    // Ramp utility 𝒰(x) = x assigned in shuffled order.
    Eigen::VectorXd util(d);
    std::vector<int> perm(d);
    for (int i = 0; i < d; ++i)
      perm[i] = i;
    for (int i = d - 1; i > 0; --i)
      std::swap(perm[i], perm[rng.uniform_index(i + 1)]);
    for (int i = 0; i < d; ++i)
      util(perm[i]) = i + 1;

    return SearchInstance{validate_generator(rates), util};
  };
}

CounterexampleResult counterexample_search(const InstanceFamily &family,
                                           int budget, std::uint64_t seed) {
  CounterexampleResult result;
  bool have_best = false;
  for (int draw = 0; draw < budget; ++draw) {
    result.draws = draw + 1;
    const SearchInstance inst = family(splitmix64(seed) + draw);
    const StationaryDistribution pi = stationary_distribution(inst.gen);
    if (is_reversible(inst.gen, pi).reversible)
      continue; // reversibility forbids a violation (Re G = PSD >= 0)
    const UtilityFunction util = make_utility(inst.utility, pi);
    LinearModel model;
    try {
      model = build_linear_model(inst.gen, pi, util);
    } catch (const Error &) {
      continue; // numerically hostile draw
    }
    const FrequencyResponse fr =
        frequency_response(model, default_omega_grid(inst.gen, 200));
    const PositiveRealReport pr = positive_real_check(fr, 1e-10);
    const std::vector<std::complex<double>> zeros = transmission_zeros(model);

    if (!have_best || pr.min_re_g < result.best_min_re_g) {
      have_best = true;
      result.best = inst;
      result.best_min_re_g = pr.min_re_g;
      result.best_argmin_omega = pr.argmin_omega;
      result.best_zeros = zeros;
    }
    if (!pr.is_pr)
      result.found_pr_violation = true;
    if (!result.found_rhp_zero) {
      for (const auto &z : zeros) {
        // Ignore the structural decoupling zero at the origin.
        if (z.real() > 1e-6 && std::abs(z) > 1e-6) {
          result.found_rhp_zero = true;
          result.rhp_zero_instance = inst;
          result.rhp_zero = z;
          break;
        }
      }
    }
  }
  return result;
}

} // namespace mfctl
