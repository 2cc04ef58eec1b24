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

#include <cmath>
#include <complex>

#include <doctest.h>

#include "mfctl/linear_model.hpp"
#include "mfctl/rng.hpp"
#include "test_util.hpp"

using namespace mfctl;
using test::chain2;
using test::cycle3;

TEST_CASE("linear model of the 2-state chain") {
  const auto two = chain2();
  const LinearModel lm = build_linear_model(two.gen, two.pi, two.util);
  CHECK((lm.a - two.gen.rates.transpose()).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((lm.c - two.util.centered).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(lm.b(0) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(lm.b(1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(lm.b.sum() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK((lm.b_closed_form - lm.b_finite_diff).lpNorm<Eigen::Infinity>() <=
        1e-6);
}

TEST_CASE("constant utility degenerates to the zero system") {
  const auto two = chain2();
  const UtilityFunction flat =
      make_utility(Eigen::VectorXd::Constant(2, 1.0), two.pi);
  const LinearModel lm = build_linear_model(two.gen, two.pi, flat);
  CHECK(lm.b.lpNorm<Eigen::Infinity>() <= 1e-12);
  CHECK(lm.c.lpNorm<Eigen::Infinity>() <= 1e-12);
  CHECK(std::abs(transfer_function(lm, {0.0, 1.0})) <= 1e-20);
  CHECK_THROWS_AS((void)transmission_zeros(lm), Error);
}

TEST_CASE("B cross-validation on a non-reversible chain") {
  const auto cyc = cycle3();
  const LinearModel lm = build_linear_model(cyc.gen, cyc.pi, cyc.util);
  CHECK((lm.b_closed_form - lm.b_finite_diff).lpNorm<Eigen::Infinity>() <=
        1e-6);
  // 2*pi.C differs from B here: the reversible shortcut must not apply.
  const Eigen::VectorXd shortcut =
      2.0 * cyc.pi.pi.cwiseProduct(cyc.util.centered);
  CHECK((lm.b - shortcut).lpNorm<Eigen::Infinity>() > 1e-3);
}

TEST_CASE("transfer function hand oracle") {
  const auto two = chain2();
  const LinearModel lm = build_linear_model(two.gen, two.pi, two.util);
  for (const double w : {0.0, 0.1, 1.0, 8.0, 100.0}) {
    const std::complex<double> g = transfer_function(lm, {0.0, w});
    const std::complex<double> expected =
        0.5 / std::complex<double>(2.0, w);
    CHECK(std::abs(g - expected) <= 1e-12);
  }
  CHECK(std::abs(transfer_function(lm, {0.0, 1e6})) < 1e-5);
}

TEST_CASE("A-form and D-form transfer functions agree") {
  const auto m = random_reversible_model(6, 19);
  const LinearModel lm = build_linear_model(m.gen, m.pi, m.util);
  Rng rng(23, 0);
  for (int k = 0; k < 20; ++k) {
    const std::complex<double> s(rng.uniform(0.01, 5.0),
                                 rng.uniform(-5.0, 5.0));
    // Dense A-form oracle: C (sI - A)^{-1} B.
    const int d = m.gen.dim();
    Eigen::MatrixXcd si = s * Eigen::MatrixXcd::Identity(d, d) -
                          lm.a.cast<std::complex<double>>();
    const std::complex<double> oracle =
        lm.c.cast<std::complex<double>>().dot(
            si.fullPivLu().solve(lm.b.cast<std::complex<double>>()));
    CHECK(std::abs(transfer_function(lm, s) - oracle) <= 1e-10);
  }
}

TEST_CASE("transmission zeros") {
  const auto two = chain2();
  const LinearModel lm = build_linear_model(two.gen, two.pi, two.util);
  // First-order lag: no finite zeros except the structural decoupling
  // zero at the origin (the unobservable mode along pi).
  for (const auto &z : transmission_zeros(lm))
    CHECK(std::abs(z) <= 1e-8);
}

TEST_CASE("frequency response identity on the reversible suite") {
  for (const int seed : {2, 5, 10}) {
    const auto m = random_reversible_model(4 + seed % 7, seed);
    const LinearModel lm = build_linear_model(m.gen, m.pi, m.util);
    const FrequencyResponse fr =
        frequency_response(lm, default_omega_grid(m.gen, 200, true));
    const PositiveRealReport pr = positive_real_check(fr, 1e-10);
    CHECK(pr.max_re_gap <= 1e-8);
    CHECK(pr.is_pr);
    CHECK(pr.min_re_g >= -1e-10);
    for (const auto &z : transmission_zeros(lm))
      CHECK(z.real() <= 1e-8);
    for (const double s : fr.psd)
      CHECK(s >= -1e-10);
    // Conjugate symmetry using the mirrored grid.
    for (std::size_t i = 0; i < fr.omegas.size(); ++i) {
      const std::complex<double> g_neg =
          transfer_function(lm, {0.0, -fr.omegas[i]});
      CHECK(std::abs(g_neg - std::conj(fr.g[i])) <= 1e-12);
    }
  }
}

TEST_CASE("f-interpretation quadrature oracle") {
  // G(jw) = int_0^inf e^{-jwt} E_pi[f(X_0) u~(X_t)] dt with f = B/pi,
  // i.e. the integrand is sum_i B_i (P^t u~)_i.
  const auto two = chain2();
  const LinearModel lm = build_linear_model(two.gen, two.pi, two.util);
  const double w = 1.1;
  const double gap = spectral_gap(two.gen);
  const double t_max = 60.0 / gap;
  const int n = 40000;
  const double dt = t_max / n;
  std::complex<double> integral = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = i * dt;
    const Eigen::VectorXd pt_u = semigroup(two.gen, t) * two.util.centered;
    const std::complex<double> f =
        std::exp(std::complex<double>(0.0, -w * t)) * lm.b.dot(pt_u);
    const double weight = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    integral += weight * f;
  }
  integral *= dt / 3.0;
  CHECK(std::abs(integral - transfer_function(lm, {0.0, w})) <= 1e-5);
}

TEST_CASE("counterexample search") {
  // A modest budget is enough to find a positive-realness violation in the
  // directed-cycle family; the full budget-500 run lives in acceptance.
  const auto result = counterexample_search(directed_cycle_family(8), 60, 7);
  CHECK(result.draws == 60);
  CHECK(result.found_pr_violation);
  REQUIRE(result.best.has_value());
  const StationaryDistribution pi = stationary_distribution(result.best->gen);
  CHECK_FALSE(is_reversible(result.best->gen, pi).reversible);
  CHECK(result.best_min_re_g < 0.0);

  // Injecting a reversible family must exhaust the search: every draw is
  // skipped and no violation can exist.
  const InstanceFamily reversible_family = [](std::uint64_t draw_seed) {
    const auto m = random_reversible_model(5, draw_seed + 1);
    return SearchInstance{m.gen, m.util.values};
  };
  const auto exhausted = counterexample_search(reversible_family, 10, 1);
  CHECK_FALSE(exhausted.found_pr_violation);
  CHECK_FALSE(exhausted.found_rhp_zero);
}
