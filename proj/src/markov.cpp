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

#include "mfctl/markov.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mfctl/rng.hpp"

namespace mfctl {

namespace {

// Nodes reachable from `start` in the support graph of `rates`
// (or its transpose).
std::vector<bool> reachable(const Eigen::MatrixXd &rates, int start,
                            bool transpose) {
  const int d = static_cast<int>(rates.rows());
  std::vector<bool> seen(d, false);
  std::vector<int> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    for (int j = 0; j < d; ++j) {
      if (j == i || seen[j])
        continue;
      const double r = transpose ? rates(j, i) : rates(i, j);
      if (r > kStructuralZero) {
        seen[j] = true;
        stack.push_back(j);
      }
    }
  }
  return seen;
}

std::string describe_unreached(const std::vector<bool> &seen,
                               const std::vector<std::string> &labels) {
  std::ostringstream os;
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i])
      os << " " << labels[i];
  return os.str();
}

} // namespace

GeneratorMatrix validate_generator(const Eigen::MatrixXd &raw,
                                   std::vector<std::string> labels) {
  if (raw.rows() != raw.cols())
    throw input_error("generator matrix must be square");
  const int d = static_cast<int>(raw.rows());
  if (d < 1)
    throw input_error("generator matrix is empty");

  if (labels.empty()) {
    labels.resize(d);
    for (int i = 0; i < d; ++i)
      labels[i] = "x" + std::to_string(i + 1);
  }
  if (static_cast<int>(labels.size()) != d)
    throw input_error("state label count does not match matrix dimension");

  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j && raw(i, j) < 0) {
        std::ostringstream os;
        os << "NegativeOffDiagonal: D(" << i << "," << j
           << ") = " << raw(i, j);
        throw input_error(os.str());
      }

  for (int i = 0; i < d; ++i) {
    const double rs = raw.row(i).sum();
    if (std::abs(rs) > 1e-12) {
      std::ostringstream os;
      os << "RowSumNonzero: row " << i << " sums to " << rs;
      throw input_error(os.str());
    }
  }

  const auto fwd = reachable(raw, 0, false);
  if (std::find(fwd.begin(), fwd.end(), false) != fwd.end())
    throw input_error("NotIrreducible: unreachable from " + labels[0] + ":" +
                      describe_unreached(fwd, labels));
  const auto bwd = reachable(raw, 0, true);
  if (std::find(bwd.begin(), bwd.end(), false) != bwd.end())
    throw input_error("NotIrreducible: cannot reach " + labels[0] + " from:" +
                      describe_unreached(bwd, labels));

  return GeneratorMatrix{raw, std::move(labels)};
}

StationaryDistribution stationary_distribution(const GeneratorMatrix &gen) {
  const int d = gen.dim();
  // Augmented system [D^T; 1^T] pi = [0; 1], solved by least squares.
  Eigen::MatrixXd m(d + 1, d);
  m.topRows(d) = gen.rates.transpose();
  m.row(d).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d + 1);
  b(d) = 1.0;
  Eigen::VectorXd pi = m.colPivHouseholderQr().solve(b);
  pi /= pi.sum();

  if ((gen.rates.transpose() * pi).cwiseAbs().maxCoeff() > 1e-10)
    throw internal_error("SingularSolve: stationary residual too large");
  if (pi.minCoeff() <= 0)
    throw internal_error("SingularSolve: non-positive stationary entry");
  return StationaryDistribution{pi};
}

UtilityFunction make_utility(const Eigen::VectorXd &values,
                             const StationaryDistribution &pi) {
  if (values.size() != pi.pi.size())
    throw input_error("utility length does not match state count");
  UtilityFunction u;
  u.values = values;
  u.baseline = pi.pi.dot(values);
  u.centered = values.array() - u.baseline;
  return u;
}

double default_reversibility_tol(const GeneratorMatrix &gen,
                                 const StationaryDistribution &pi) {
  const double scale =
      (pi.pi.asDiagonal() * gen.rates).cwiseAbs().maxCoeff();
  return 1e-9 * scale;
}

ReversibilityReport is_reversible(const GeneratorMatrix &gen,
                                  const StationaryDistribution &pi,
                                  double tol) {
  if (tol < 0)
    tol = default_reversibility_tol(gen, pi);
  const int d = gen.dim();
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      worst = std::max(worst, std::abs(pi.pi(i) * gen.rates(i, j) -
                                       pi.pi(j) * gen.rates(j, i)));
  return ReversibilityReport{worst <= tol, worst, tol};
}

GeneratorMatrix random_reversible_generator(const Eigen::VectorXd &pi,
                                            std::uint64_t seed,
                                            double edge_density) {
  const int d = static_cast<int>(pi.size());
  if (d < 2)
    throw input_error("need at least two states");
  if (pi.minCoeff() <= 0 || std::abs(pi.sum() - 1.0) > 1e-10)
    throw input_error("pi must be a strictly positive probability vector");
  if (edge_density <= 0 || edge_density > 1)
    throw input_error("edge_density must lie in (0, 1]");

  constexpr int kMaxAttempts = 64;
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        const bool keep = rng.uniform() < edge_density;
        const double weight = rng.uniform(0.5, 1.5);
        if (keep)
          w(i, j) = w(j, i) = weight;
      }

    // Undirected connectivity of the support of w.
    const auto seen = reachable(w, 0, false);
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
      continue;

    Eigen::MatrixXd rates = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j)
        if (j != i)
          rates(i, j) = w(i, j) / pi(i);
      rates(i, i) = -rates.row(i).sum();
    }
    return validate_generator(rates);
  }
  throw internal_error("DisconnectedDraw: no connected support graph after "
                       "64 attempts; raise edge_density");
}

GeneratorMatrix time_reversal(const GeneratorMatrix &gen,
                              const StationaryDistribution &pi) {
  const int d = gen.dim();
  Eigen::MatrixXd rev(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      rev(i, j) = pi.pi(j) * gen.rates(j, i) / pi.pi(i);
  // Exact row sums can drift by roundoff; repair the diagonal before
  // validation.
  for (int i = 0; i < d; ++i)
    rev(i, i) -= rev.row(i).sum();
  return validate_generator(rev, gen.state_labels);
}

Eigen::MatrixXd semigroup(const GeneratorMatrix &gen, double t) {
  if (t < 0)
    throw input_error("semigroup time must be non-negative");
  Eigen::MatrixXd p = (t * gen.rates).exp();
  return p.cwiseMax(0.0);
}

Eigen::VectorXd expm_apply(const Eigen::MatrixXd &m, double t,
                           const Eigen::VectorXd &v) {
  const int d = static_cast<int>(m.rows());
  if (d <= 64)
    return (t * m).exp() * v;
  // Step-doubling: one dense exponential of a small-norm matrix, applied
  // repeatedly to the vector.
  const double norm = (t * m).cwiseAbs().rowwise().sum().maxCoeff();
  int k = 0;
  while ((norm / (1 << k)) > 1.0 && k < 40)
    ++k;
  const Eigen::MatrixXd step = (t / double(1LL << k) * m).exp();
  Eigen::VectorXd out = v;
  for (long long i = 0; i < (1LL << k); ++i)
    out = step * out;
  return out;
}

double spectral_gap(const GeneratorMatrix &gen) {
  const Eigen::VectorXcd ev = gen.rates.eigenvalues();
  double gap = 0.0;
  bool found = false;
  for (int i = 0; i < ev.size(); ++i) {
    const double re = ev(i).real();
    if (std::abs(ev(i)) < 1e-9 * std::max(1.0, gen.rates.cwiseAbs().maxCoeff()))
      continue; // the structural zero eigenvalue
    if (!found || re > -gap) {
      gap = -re;
      found = true;
    }
  }
  if (!found || gap <= 0)
    throw internal_error("spectral gap not found");
  return gap;
}

Eigen::VectorXcd resolvent_solve(const GeneratorMatrix &gen,
                                 const StationaryDistribution &pi,
                                 std::complex<double> s,
                                 const Eigen::VectorXcd &rhs) {
  const int d = gen.dim();
  if (rhs.size() != d)
    throw input_error("rhs length does not match state count");

  if (s == std::complex<double>(0.0, 0.0)) {
    const std::complex<double> mean = pi.pi.cast<std::complex<double>>().dot(rhs);
    if (std::abs(mean) > 1e-10)
      throw input_error("UncenteredRhsAtZero: pi-mean of rhs is " +
                        std::to_string(std::abs(mean)));
    // (0I - D) x = rhs on the pi-centered subspace: augmented rows [-D; pi^T].
    Eigen::MatrixXd m(d + 1, d);
    m.topRows(d) = -gen.rates;
    m.row(d) = pi.pi.transpose();
    const auto qr = m.colPivHouseholderQr();
    Eigen::VectorXd br(d + 1), bi(d + 1);
    br << rhs.real(), 0.0;
    bi << rhs.imag(), 0.0;
    const Eigen::VectorXd xr = qr.solve(br);
    const Eigen::VectorXd xi = qr.solve(bi);
    return xr + std::complex<double>(0, 1) * xi;
  }

  Eigen::MatrixXcd m = -gen.rates.cast<std::complex<double>>();
  m.diagonal().array() += s;
  const auto lu = m.fullPivLu();
  if (!lu.isInvertible()) {
    std::ostringstream os;
    os << "SingularAtS: s = " << s.real() << (s.imag() < 0 ? "-" : "+")
       << std::abs(s.imag()) << "j is an eigenvalue of D";
    throw input_error(os.str());
  }
  return lu.solve(rhs);
}

Eigen::VectorXd poisson_solve(const GeneratorMatrix &gen,
                              const StationaryDistribution &pi,
                              const UtilityFunction &util) {
  const Eigen::VectorXcd h =
      resolvent_solve(gen, pi, {0.0, 0.0}, util.centered.cast<std::complex<double>>());
  Eigen::VectorXd h0 = h.real();
  h0.array() -= h0(0);
  return h0;
}

double autocovariance(const GeneratorMatrix &gen,
                      const StationaryDistribution &pi,
                      const UtilityFunction &util, double t) {
  if (t < 0)
    throw input_error("autocovariance lag must be non-negative");
  const Eigen::VectorXd pt_u = expm_apply(gen.rates, t, util.centered);
  return (pi.pi.array() * util.centered.array() * pt_u.array()).sum();
}

double psd(const GeneratorMatrix &gen, const StationaryDistribution &pi,
           const UtilityFunction &util, double omega) {
  const Eigen::VectorXcd x = resolvent_solve(
      gen, pi, {0.0, omega}, util.centered.cast<std::complex<double>>());
  const std::complex<double> val =
      (pi.pi.array() * util.centered.array()).matrix().cast<std::complex<double>>().dot(x);
  // dot() conjugates the left argument; it is real here, so no correction.
  return 2.0 * val.real();
}

} // namespace mfctl
