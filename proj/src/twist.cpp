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

#include "mfctl/twist.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

namespace mfctl {

namespace {

// One Newton step for the bordered system
//   (M - lambda I) v = 0,  v(x1) = 1,
// polishing the eigenpair returned by the dense solver to roundoff level.
void refine_eigenpair(const Eigen::MatrixXd &m, double &lambda,
                      Eigen::VectorXd &v) {
  const int d = static_cast<int>(m.rows());
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(d + 1, d + 1);
  Eigen::VectorXd rhs(d + 1);
  for (int iter = 0; iter < 3; ++iter) {
    jac.topLeftCorner(d, d) = m;
    jac.topLeftCorner(d, d).diagonal().array() -= lambda;
    jac.topRightCorner(d, 1) = -v;
    jac.bottomLeftCorner(1, d).setZero();
    jac(d, 0) = 1.0;
    jac(d, d) = 0.0;
    rhs.head(d) = -(m * v - lambda * v);
    rhs(d) = 1.0 - v(0);
    const Eigen::VectorXd delta = jac.partialPivLu().solve(rhs);
    v += delta.head(d);
    lambda += delta(d);
    if (rhs.cwiseAbs().maxCoeff() < 1e-14 * (1.0 + std::abs(lambda)))
      break;
  }
}

} // namespace

std::pair<double, Eigen::VectorXd>
pf_eigenpair(const GeneratorMatrix &gen, const UtilityFunction &util,
             double zeta) {
  const int d = gen.dim();
  Eigen::MatrixXd m = gen.rates;
  m.diagonal() += zeta * util.values;

  Eigen::EigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success)
    throw internal_error("EigenSolveFailure: dense eigensolver did not converge");

  int best = 0;
  for (int i = 1; i < d; ++i)
    if (solver.eigenvalues()(i).real() > solver.eigenvalues()(best).real())
      best = i;

  const std::complex<double> lam = solver.eigenvalues()(best);
  const double scale = m.cwiseAbs().maxCoeff();
  if (std::abs(lam.imag()) > 1e-8 * std::max(1.0, scale))
    throw internal_error("EigenSolveFailure: max-real-part eigenvalue has "
                         "imaginary part " + std::to_string(lam.imag()));

  Eigen::VectorXd v = solver.eigenvectors().col(best).real();
  if (v(0) < 0)
    v = -v;
  if (std::abs(v(0)) < 1e-300)
    throw internal_error("EigenSolveFailure: eigenvector vanishes at x1");
  v /= v(0);

  double lambda = lam.real();
  refine_eigenpair(m, lambda, v);

  for (int i = 0; i < d; ++i) {
    if (v(i) < -1e-12)
      throw internal_error("EigenSolveFailure: eigenvector component " +
                           std::to_string(i) + " is negative: " +
                           std::to_string(v(i)));
    if (v(i) < 1e-12)
      v(i) = 1e-12; // Perron-Frobenius positivity holds only in exact arithmetic
  }
  return {lambda, v};
}

TwistedFamily twisted_generator(const GeneratorMatrix &gen,
                                const UtilityFunction &util, double zeta) {
  const int d = gen.dim();
  auto [lambda, v] = pf_eigenpair(gen, util, zeta);

  Eigen::MatrixXd rates(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double entry = gen.rates(i, j);
      if (i == j)
        entry += zeta * util.values(i) - lambda;
      rates(i, j) = v(j) / v(i) * entry;
    }
  }
  // The eigenvector equation makes the row sums vanish analytically; repair
  // the roundoff remainder on the diagonal so the result validates.
  for (int i = 0; i < d; ++i)
    rates(i, i) -= rates.row(i).sum();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j && rates(i, j) < 0) {
        if (rates(i, j) < -1e-12)
          throw internal_error("twisted generator has a negative rate");
        rates(i, j) = 0.0;
      }

  TwistedFamily fam;
  fam.base = gen;
  fam.util = util;
  fam.zeta = zeta;
  fam.eigenvalue = lambda;
  fam.eigenvector = std::move(v);
  fam.twisted = validate_generator(rates, gen.state_labels);
  return fam;
}

double lambda_finite_horizon(const GeneratorMatrix &gen,
                             const UtilityFunction &util, double zeta,
                             double t_horizon, int state) {
  if (t_horizon <= 0)
    throw input_error("horizon must be positive");
  if (state < 0 || state >= gen.dim())
    throw input_error("state index out of range");

  Eigen::MatrixXd m = gen.rates;
  m.diagonal() += zeta * util.values;

  // exp(T*M) by squaring with per-step max-norm renormalization; the logs
  // of the normalizers are added back at the end. Keeps zeta*int(U) in
  // range for large T.
  const double norm = (t_horizon * m).cwiseAbs().rowwise().sum().maxCoeff();
  int k = 0;
  while ((norm / std::pow(2.0, k)) > 1.0 && k < 60)
    ++k;
  Eigen::MatrixXd e = (t_horizon / std::pow(2.0, k) * m).exp();
  double log_scale = 0.0;
  for (int step = 0; step < k; ++step) {
    const double s = e.cwiseAbs().maxCoeff();
    e /= s;
    log_scale = 2.0 * (log_scale + std::log(s));
    e = e * e;
  }
  const double entry = (e * Eigen::VectorXd::Ones(gen.dim()))(state);
  if (entry <= 0)
    throw internal_error("Overflow: renormalized semigroup row vanished");
  return std::log(entry) + log_scale;
}

double welfare_of_twisted(const GeneratorMatrix &gen,
                          const UtilityFunction &util, double zeta,
                          double t_horizon, int state) {
  if (t_horizon <= 0)
    throw input_error("horizon must be positive");
  const TwistedFamily fam = twisted_generator(gen, util, zeta);
  const Eigen::VectorXd logv = fam.eigenvector.array().log();
  // E[log v(X_T)] under the twisted law, started from `state`.
  const Eigen::VectorXd expect =
      expm_apply(fam.twisted.rates, t_horizon, logv);
  return t_horizon * fam.eigenvalue - (expect(state) - logv(state));
}

DerivativeCheck lmgf_derivative_check(const GeneratorMatrix &gen,
                                      const StationaryDistribution &pi,
                                      const UtilityFunction &util, double h) {
  if (h <= 0)
    throw input_error("finite-difference step must be positive");
  const double lp = pf_eigenpair(gen, util, h).first;
  const double lm = pf_eigenpair(gen, util, -h).first;
  return DerivativeCheck{(lp - lm) / (2.0 * h), util.baseline};
}

VectorDerivativeCheck
eigenvector_derivative_check(const GeneratorMatrix &gen,
                             const StationaryDistribution &pi,
                             const UtilityFunction &util, double h) {
  if (h <= 0)
    throw input_error("finite-difference step must be positive");
  const Eigen::VectorXd vp = pf_eigenpair(gen, util, h).second;
  const Eigen::VectorXd vm = pf_eigenpair(gen, util, -h).second;
  VectorDerivativeCheck out;
  out.finite_difference = (vp - vm) / (2.0 * h);
  out.analytic = poisson_solve(gen, pi, util);
  return out;
}

TwistTable::TwistTable(const GeneratorMatrix &gen, const UtilityFunction &util,
                       double zeta_min, double zeta_max, double spacing)
    : zeta_min_(zeta_min), zeta_max_(zeta_max), spacing_(spacing) {
  if (zeta_max < zeta_min)
    throw input_error("empty zeta range");
  if (spacing <= 0)
    throw input_error("table spacing must be positive");
  const int n =
      std::max(2, static_cast<int>(std::ceil((zeta_max - zeta_min) / spacing)) + 1);
  spacing_ = (zeta_max_ - zeta_min_) / (n - 1);
  if (spacing_ <= 0) { // degenerate range: a single repeated node
    spacing_ = 1.0;
    zeta_max_ = zeta_min_ + spacing_;
  }
  nodes_.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double z = zeta_min_ + i * spacing_;
    nodes_.push_back(twisted_generator(gen, util, z).twisted.rates);
    max_exit_rate_ =
        std::max(max_exit_rate_, nodes_.back().diagonal().cwiseAbs().maxCoeff());
  }
}

void TwistTable::rates_at(double zeta, Eigen::MatrixXd &out) const {
  if (zeta < zeta_min_ - 1e-12 || zeta > zeta_max_ + 1e-12)
    throw input_error("zeta outside precomputed table range");
  const int last = static_cast<int>(nodes_.size()) - 1;
  double pos = (zeta - zeta_min_) / spacing_;
  int i = std::min(last - 1, std::max(0, static_cast<int>(std::floor(pos))));
  double frac = std::min(1.0, std::max(0.0, pos - i));
  out = (1.0 - frac) * nodes_[i] + frac * nodes_[i + 1];
}

Eigen::MatrixXd TwistTable::rates_at(double zeta) const {
  Eigen::MatrixXd out;
  rates_at(zeta, out);
  return out;
}

} // namespace mfctl
