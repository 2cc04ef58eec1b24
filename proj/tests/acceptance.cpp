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

// Acceptance gate: eleven numbered end-to-end criteria, one pass/fail line
// each. Run with no arguments for the full gate, or with a criterion
// number (1-11) to run just that one. Exit code = number of failures.
//
// Tolerances are pinned here on purpose; loosening them is a contract
// change, not a bug fix.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mfctl/linear_model.hpp"
#include "mfctl/meanfield.hpp"
#include "mfctl/pipelines.hpp"
#include "mfctl/population.hpp"
#include "mfctl/twist.hpp"

using namespace mfctl;

namespace {

ModelInstance chain2() {
  Eigen::MatrixXd d(2, 2);
  d << -1, 1, 1, -1;
  Eigen::VectorXd u(2);
  u << 0, 1;
  return make_model(d, u);
}

// 25 reversible instances, d cycling through 2..12, seeds 1..25.
std::vector<ModelInstance> reversible_suite() {
  std::vector<ModelInstance> suite;
  for (int seed = 1; seed <= 25; ++seed)
    suite.push_back(random_reversible_model(2 + (seed - 1) % 11, seed));
  return suite;
}

// 25 non-reversible instances: directed cycles with chords, d in 3..12.
std::vector<ModelInstance> nonreversible_suite() {
  std::vector<ModelInstance> suite;
  int seed = 1;
  while (suite.size() < 25) {
    const int d = 3 + int(suite.size()) % 10;
    const SearchInstance inst = directed_cycle_family(d)(seed++);
    const StationaryDistribution pi = stationary_distribution(inst.gen);
    if (is_reversible(inst.gen, pi).reversible)
      continue; // the family is non-reversible by construction, but be sure
    suite.push_back(
        {inst.gen, pi, make_utility(inst.utility, pi)});
  }
  return suite;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Criterion = std::function<Outcome()>;

// --- criterion bodies -------------------------------------------------

Outcome criterion1() {
  double worst = 0.0;
  for (const auto &m : reversible_suite()) {
    const LinearModel lm = build_linear_model(m.gen, m.pi, m.util);
    const FrequencyResponse fr =
        frequency_response(lm, default_omega_grid(m.gen, 400));
    for (const double gap : fr.re_gap)
      worst = std::max(worst, std::abs(gap));
  }
  std::ostringstream os;
  os << "max |Re G(jw) - PSD_Y(w)| = " << worst << " (tol 1e-8)";
  return {worst <= 1e-8, os.str()};
}

Outcome criterion2() {
  double worst_min_re = 0.0, worst_zero = 0.0;
  for (const auto &m : reversible_suite()) {
    const LinearModel lm = build_linear_model(m.gen, m.pi, m.util);
    const FrequencyResponse fr =
        frequency_response(lm, default_omega_grid(m.gen, 400));
    const PositiveRealReport pr = positive_real_check(fr, 1e-10);
    worst_min_re = std::min(worst_min_re, pr.min_re_g);
    for (const auto &z : transmission_zeros(lm))
      worst_zero = std::max(worst_zero, z.real());
  }
  std::ostringstream os;
  os << "min Re G = " << worst_min_re << " (>= -1e-10), max Re zero = "
     << worst_zero << " (<= 1e-8)";
  return {worst_min_re >= -1e-10 && worst_zero <= 1e-8, os.str()};
}

Outcome criterion3() {
  double worst_cross = 0.0, worst_shortcut = 0.0;
  for (const auto &m : reversible_suite()) {
    const LinearModel lm = build_linear_model(m.gen, m.pi, m.util);
    worst_cross = std::max(
        worst_cross,
        (lm.b_closed_form - lm.b_finite_diff).lpNorm<Eigen::Infinity>());
    const Eigen::VectorXd shortcut =
        2.0 * m.pi.pi.cwiseProduct(m.util.centered);
    worst_shortcut = std::max(
        worst_shortcut, (lm.b - shortcut).lpNorm<Eigen::Infinity>());
  }
  for (const auto &m : nonreversible_suite()) {
    const LinearModel lm = build_linear_model(m.gen, m.pi, m.util);
    worst_cross = std::max(
        worst_cross,
        (lm.b_closed_form - lm.b_finite_diff).lpNorm<Eigen::Infinity>());
  }
  std::ostringstream os;
  os << "max ||B_closed - B_fd|| = " << worst_cross
     << " (tol 1e-6), max reversible ||B - 2pi.C|| = " << worst_shortcut
     << " (tol 1e-9)";
  return {worst_cross <= 1e-6 && worst_shortcut <= 1e-9, os.str()};
}

Outcome criterion4() {
  double worst_lambda = 0.0, worst_vec = 0.0;
  auto run = [&](const ModelInstance &m) {
    const auto dl = lmgf_derivative_check(m.gen, m.pi, m.util);
    worst_lambda = std::max(worst_lambda,
                            std::abs(dl.finite_difference - dl.analytic));
    const auto dv = eigenvector_derivative_check(m.gen, m.pi, m.util);
    worst_vec = std::max(
        worst_vec,
        (dv.finite_difference - dv.analytic).lpNorm<Eigen::Infinity>());
  };
  for (const auto &m : reversible_suite())
    run(m);
  for (const auto &m : nonreversible_suite())
    run(m);
  std::ostringstream os;
  os << "max |FD dLambda - ybar| = " << worst_lambda
     << " (tol 1e-7), max ||FD dv - h0|| = " << worst_vec << " (tol 1e-6)";
  return {worst_lambda <= 1e-7 && worst_vec <= 1e-6, os.str()};
}

Outcome criterion5() {
  // Literal reading: Lambda*_T / T itself at T = 200/gap. The boundary
  // term log v(x) + log(u_zeta . 1) decays only like 1/T, so this demands
  // |boundary|/T <= 1e-6 at T = 200/gap, which generic instances fail.
  double worst = 0.0;
  const auto suite = reversible_suite();
  for (int k = 0; k < 10; ++k) {
    const auto &m = suite[k];
    const double t = 200.0 / spectral_gap(m.gen);
    for (const double zeta : {-1.0, -0.3, 0.3, 1.0}) {
      const auto [lambda, v] = pf_eigenpair(m.gen, m.util, zeta);
      const double lt = lambda_finite_horizon(m.gen, m.util, zeta, t, 0);
      worst = std::max(worst, std::abs(lt / t - lambda));
    }
  }
  std::ostringstream os;
  os << "max |Lambda*_T/T - Lambda| = " << worst
     << " (tol 1e-6 at T = 200/gap)";
  return {worst <= 1e-6, os.str()};
}

Outcome criterion6() {
  double worst_row = 0.0, worst_offdiag = 0.0, worst_rev = 0.0;
  bool support_ok = true;
  for (const auto &m : reversible_suite()) {
    for (int k = 0; k < 41; ++k) {
      const double zeta = -2.0 + 4.0 * k / 40.0;
      const auto fam = twisted_generator(m.gen, m.util, zeta);
      worst_row = std::max(
          worst_row,
          fam.twisted.rates.rowwise().sum().lpNorm<Eigen::Infinity>());
      for (int i = 0; i < m.gen.dim(); ++i)
        for (int j = 0; j < m.gen.dim(); ++j)
          if (i != j) {
            worst_offdiag =
                std::min(worst_offdiag, fam.twisted.rates(i, j));
            if ((fam.twisted.rates(i, j) > kStructuralZero) !=
                (m.gen.rates(i, j) > kStructuralZero))
              support_ok = false;
          }
      const StationaryDistribution pz = stationary_distribution(fam.twisted);
      double violation = 0.0;
      for (int i = 0; i < m.gen.dim(); ++i)
        for (int j = 0; j < m.gen.dim(); ++j)
          violation = std::max(
              violation, std::abs(pz.pi(i) * fam.twisted.rates(i, j) -
                                  pz.pi(j) * fam.twisted.rates(j, i)));
      // Relative to the rate scale, as in is_reversible's default.
      const double scale =
          (pz.pi.asDiagonal() * fam.twisted.rates).lpNorm<Eigen::Infinity>();
      worst_rev = std::max(worst_rev, violation / std::max(scale, 1e-300));
    }
  }
  std::ostringstream os;
  os << "max |row sum| = " << worst_row << " (tol 1e-10), min offdiag = "
     << worst_offdiag << " (>= 0), support preserved = "
     << (support_ok ? "yes" : "NO") << ", max relative detailed-balance gap = "
     << worst_rev << " (tol 1e-9)";
  return {worst_row <= 1e-10 && worst_offdiag >= 0.0 && support_ok &&
              worst_rev <= 1e-9,
          os.str()};
}

Outcome criterion7() {
  double worst = 0.0;
  for (const auto &m : {chain2(), random_reversible_model(6, 7)}) {
    const double gap = spectral_gap(m.gen);
    const auto traj =
        integrate_meanfield(m.gen, m.util, ControlSignal::constant(0.0),
                            m.pi.pi, 100.0 / gap, 0.01 / gap, 1.0 / gap);
    for (const auto &mu : traj.mus)
      worst = std::max(worst, (mu - m.pi.pi).lpNorm<1>());
  }
  std::ostringstream os;
  os << "sup_t ||mu_t - pi||_1 = " << worst << " (tol 1e-9)";
  return {worst <= 1e-9, os.str()};
}

Outcome criterion8() {
  // Asymmetric chain: the symmetric one has an odd symmetry that cancels
  // the quadratic remainder term and breaks the ratio test.
  Eigen::MatrixXd d(2, 2);
  d << -2, 2, 1, -1;
  Eigen::VectorXd u(2);
  u << 0, 1;
  const ModelInstance m = make_model(d, u);
  const LinearModel lm = build_linear_model(m.gen, m.pi, m.util);
  const double w = spectral_gap(m.gen);
  const double eps = 0.01;
  const double t_end = 40.0, dt = 1e-3;

  // Steady-state amplitude of the linear response.
  const auto lin = integrate_linearized(lm, ControlSignal::sinusoid(eps, w),
                                        Eigen::VectorXd::Zero(2), t_end, dt,
                                        0.01);
  double amplitude = 0.0;
  for (std::size_t k = 0; k < lin.times.size(); ++k)
    if (lin.times[k] >= t_end - 2.0 * M_PI / w * 2.0)
      amplitude = std::max(amplitude, std::abs(lin.gammas[k]));
  const double expected = eps * std::abs(transfer_function(lm, {0.0, w}));
  const double rel_amp_err = std::abs(amplitude - expected) / expected;

  const double g1 =
      linearization_error(m.gen, m.pi, m.util, lm, eps, w, t_end, dt);
  const double g2 =
      linearization_error(m.gen, m.pi, m.util, lm, 2 * eps, w, t_end, dt);
  const double ratio = g2 / g1;

  std::ostringstream os;
  os << "amplitude error = " << rel_amp_err * 100 << "% (tol 1%), "
     << "gap(2e)/gap(e) = " << ratio << " (in [3.5, 4.5])";
  return {rel_amp_err <= 0.01 && ratio >= 3.5 && ratio <= 4.5, os.str()};
}

Outcome criterion9() {
  const auto m = chain2();
  const ControlSignal sig = ControlSignal::sinusoid(0.2, 1.0);
  const double t_end = 10.0, output_dt = 0.25;
  const auto mf = integrate_meanfield(m.gen, m.util, sig, m.pi.pi, t_end,
                                      1e-3, output_dt);
  // Stationary std of U(X) for Bernoulli(1/2) output.
  const double sigma = std::sqrt(
      m.pi.pi.dot(m.util.centered.cwiseProduct(m.util.centered)));

  PopulationOptions opts;
  opts.n_agents = 100000;
  opts.seed = 1;
  opts.t_end = t_end;
  opts.output_dt = output_dt;
  const auto trace = simulate_population(m.gen, m.util, sig, m.pi.pi, opts);
  const MeanFieldGap gap = meanfield_gap(trace, mf);
  const double se = sigma / std::sqrt(double(opts.n_agents));
  const bool close = gap.sup_output <= 5.0 * se;

  // N^{-1/2} scaling: mean sup-gap over 10 seeds for each N.
  std::vector<double> log_n, log_gap;
  for (const long n : {100L, 1000L, 10000L, 100000L}) {
    double mean = 0.0;
    for (int seed = 1; seed <= 10; ++seed) {
      PopulationOptions o = opts;
      o.n_agents = n;
      o.seed = seed;
      const auto tr = simulate_population(m.gen, m.util, sig, m.pi.pi, o);
      mean += meanfield_gap(tr, mf).sup_output;
    }
    mean /= 10.0;
    log_n.push_back(std::log(double(n)));
    log_gap.push_back(std::log(mean));
  }
  // Least-squares slope of log gap vs log N.
  const int k = int(log_n.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < k; ++i) {
    sx += log_n[i];
    sy += log_gap[i];
    sxx += log_n[i] * log_n[i];
    sxy += log_n[i] * log_gap[i];
  }
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);

  std::ostringstream os;
  os << "sup gap = " << gap.sup_output << " (bound " << 5.0 * se
     << "), scaling slope = " << slope << " (in [-0.6, -0.4])";
  return {close && slope >= -0.6 && slope <= -0.4, os.str()};
}

Outcome criterion10() {
  const auto result = counterexample_search(directed_cycle_family(8), 500, 7);
  std::ostringstream os;
  os << "PR violation found = " << (result.found_pr_violation ? "yes" : "no")
     << " (min Re G = " << result.best_min_re_g << "), RHP zero found = "
     << (result.found_rhp_zero ? "yes" : "no");
  if (result.found_rhp_zero)
    os << " (z = " << result.rhp_zero.real() << " + "
       << result.rhp_zero.imag() << "j)";
  return {result.found_pr_violation && result.found_rhp_zero, os.str()};
}

Outcome criterion11() {
  namespace fs = std::filesystem;
  const auto m = random_reversible_model(4, 3);
  const fs::path base = fs::temp_directory_path() / "mfctl_acceptance_11";
  fs::remove_all(base);

  auto read_file = [](const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };

  bool identical = true;
  std::string detail;
  for (const int threads : {1, 8}) {
    SimulateAgentsOptions opts;
    opts.signal = "sin:0.3,2.0";
    opts.n_agents = 20000;
    opts.seed = 12;
    opts.t_end = 5.0;
    opts.output_dt = 0.25;
    opts.threads = threads;
    const fs::path dir = base / ("threads_" + std::to_string(threads));
    fs::create_directories(dir);
    run_simulate_agents(m, opts, dir.string());
  }
  const std::string a = read_file(base / "threads_1" / "population.csv");
  const std::string b = read_file(base / "threads_8" / "population.csv");
  identical = !a.empty() && a == b;

  // Same config and seed twice: every emitted CSV byte-identical.
  for (const char *tag : {"rep_a", "rep_b"}) {
    SimulateMfOptions opts;
    opts.signal = "sin:0.2,1.0";
    opts.t_end = 3.0;
    opts.dt = 1e-3;
    opts.output_dt = 0.1;
    const fs::path dir = base / tag;
    fs::create_directories(dir);
    run_simulate_mf(m, opts, dir.string());
  }
  const bool mf_identical = read_file(base / "rep_a" / "meanfield.csv") ==
                            read_file(base / "rep_b" / "meanfield.csv");
  fs::remove_all(base);

  std::ostringstream os;
  os << "population.csv 1 vs 8 threads byte-identical = "
     << (identical ? "yes" : "NO") << ", repeated meanfield.csv identical = "
     << (mf_identical ? "yes" : "NO");
  return {identical && mf_identical, os.str()};
}

const char *const kNames[11] = {
    "frequency-domain identity on the reversible suite",
    "positive realness and minimum phase on the reversible suite",
    "closed-form vs finite-difference B",
    "derivative identities at zeta = 0",
    "eigenvalue limit of Lambda*_T/T at T = 200/gap",
    "twisted generator family validity",
    "mean-field stationarity",
    "linearization fidelity and quadratic remainder",
    "mean-field limit of the agent simulation",
    "non-reversible counterexample search",
    "determinism across thread counts and reruns",
};

} // namespace

int main(int argc, char **argv) {
  const Criterion criteria[11] = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9, criterion10,
      criterion11};

  int first = 0, last = 11;
  if (argc > 1) {
    const int n = std::atoi(argv[1]);
    if (n < 1 || n > 11) {
      std::fprintf(stderr, "usage: %s [criterion 1-11]\n", argv[0]);
      return 64;
    }
    first = n - 1;
    last = n;
  }

  int failures = 0;
  for (int i = first; i < last; ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i]();
    } catch (const std::exception &e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start)
            .count();
    std::printf("criterion %2d [%s]: %s — %s (%.1fs)\n", i + 1, kNames[i],
                outcome.pass ? "PASS" : "FAIL", outcome.detail.c_str(),
                seconds);
    std::fflush(stdout);
    if (!outcome.pass)
      ++failures;
  }
  return failures;
}
