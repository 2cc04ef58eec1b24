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

#include <doctest.h>

#include "mfctl/population.hpp"
#include "test_util.hpp"

using namespace mfctl;
using test::chain2;

TEST_CASE("single-agent ergodic occupation") {
  const auto two = chain2();
  PopulationOptions opts;
  opts.n_agents = 1;
  opts.seed = 3;
  opts.t_end = 4000.0;
  opts.output_dt = 1.0;
  const auto trace = simulate_population(
      two.gen, two.util, ControlSignal::constant(0.0), two.pi.pi, opts);
  Eigen::VectorXd occupation = Eigen::VectorXd::Zero(2);
  for (const auto &e : trace.empirical)
    occupation += e;
  occupation /= double(trace.empirical.size());
  const double gap = spectral_gap(two.gen);
  CHECK((occupation - two.pi.pi).lpNorm<Eigen::Infinity>() <=
        3.0 / std::sqrt(opts.t_end * gap));
}

TEST_CASE("stationary population stays near pi at CLT scale") {
  const auto two = chain2();
  PopulationOptions opts;
  opts.n_agents = 50000;
  opts.seed = 11;
  opts.t_end = 10.0;
  opts.output_dt = 0.5;
  const auto trace = simulate_population(
      two.gen, two.util, ControlSignal::constant(0.0), two.pi.pi, opts);
  const double bound = 5.0 * std::sqrt(2.0 / double(opts.n_agents));
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    CHECK((trace.empirical[k] - two.pi.pi).lpNorm<1>() <= bound);
    // agg_output is exactly the utility-weighted empirical vector.
    CHECK(trace.agg_output[k] ==
          doctest::Approx(two.util.values.dot(trace.empirical[k]))
              .epsilon(1e-15));
    CHECK(trace.empirical[k].sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("thread count does not change the trace") {
  const auto m = random_reversible_model(3, 41);
  const ControlSignal sig = ControlSignal::sinusoid(0.3, 2.0);
  PopulationOptions opts;
  opts.n_agents = 4000;
  opts.seed = 5;
  opts.t_end = 4.0;
  opts.output_dt = 0.25;

  opts.threads = 1;
  const auto a = simulate_population(m.gen, m.util, sig, m.pi.pi, opts);
  opts.threads = 8;
  const auto b = simulate_population(m.gen, m.util, sig, m.pi.pi, opts);
  REQUIRE(a.times.size() == b.times.size());
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    CHECK(a.empirical[k] == b.empirical[k]); // bitwise
    CHECK(a.agg_output[k] == b.agg_output[k]);
  }
  CHECK(a.theta == b.theta);
}

TEST_CASE("frozen input relaxes to the twisted stationary law") {
  const auto two = chain2();
  const double c = -0.7;
  const auto fam = twisted_generator(two.gen, two.util, c);
  const StationaryDistribution pc = stationary_distribution(fam.twisted);
  PopulationOptions opts;
  opts.n_agents = 20000;
  opts.seed = 29;
  opts.t_end = 30.0;
  opts.output_dt = 30.0;
  const auto trace = simulate_population(
      two.gen, two.util, ControlSignal::constant(c), two.pi.pi, opts);
  CHECK((trace.empirical.back() - pc.pi).lpNorm<1>() <=
        5.0 * std::sqrt(2.0 / double(opts.n_agents)));
}

TEST_CASE("proportional initialization is exact at t = 0") {
  const auto m = random_reversible_model(4, 2);
  PopulationOptions opts;
  opts.n_agents = 1000;
  opts.seed = 1;
  opts.t_end = 1.0;
  opts.output_dt = 1.0;
  opts.proportional_init = true;
  const auto trace = simulate_population(
      m.gen, m.util, ControlSignal::constant(0.0), m.pi.pi, opts);
  CHECK((trace.empirical.front() - m.pi.pi).lpNorm<Eigen::Infinity>() <=
        1.0 / double(opts.n_agents));
}

TEST_CASE("meanfield gap") {
  const auto two = chain2();
  const ControlSignal sig = ControlSignal::sinusoid(0.2, 1.5);
  const double t_end = 8.0, output_dt = 0.25;
  const auto mf = integrate_meanfield(two.gen, two.util, sig, two.pi.pi,
                                      t_end, 1e-3, output_dt);
  PopulationOptions opts;
  opts.n_agents = 20000;
  opts.seed = 17;
  opts.t_end = t_end;
  opts.output_dt = output_dt;
  const auto trace =
      simulate_population(two.gen, two.util, sig, two.pi.pi, opts);
  const MeanFieldGap gap = meanfield_gap(trace, mf);
  CHECK(gap.sup_output <= 8.0 * 0.5 / std::sqrt(double(opts.n_agents)));
  CHECK(gap.sup_l1 <= 16.0 * 0.5 / std::sqrt(double(opts.n_agents)));

  // Identity: a trace built from the mean field itself has zero gap.
  PopulationTrace self;
  self.times = mf.times;
  self.empirical = mf.mus;
  self.agg_output = mf.outputs;
  self.n_agents = 1;
  const MeanFieldGap zero = meanfield_gap(self, mf);
  CHECK(zero.sup_l1 == 0.0);
  CHECK(zero.sup_output == 0.0);

  // Mismatched grids are an input error.
  PopulationTrace skewed = self;
  skewed.times.back() += 0.5;
  CHECK_THROWS_AS((void)meanfield_gap(skewed, mf), Error);
}

TEST_CASE("seed permutation leaves the ensemble statistics unchanged") {
  const auto two = chain2();
  PopulationOptions opts;
  opts.n_agents = 5000;
  opts.t_end = 5.0;
  opts.output_dt = 5.0;
  double sum = 0.0, sum_sq = 0.0;
  const int reps = 8;
  for (int r = 0; r < reps; ++r) {
    opts.seed = 100 + r;
    const auto trace = simulate_population(
        two.gen, two.util, ControlSignal::constant(0.0), two.pi.pi, opts);
    sum += trace.agg_output.back();
    sum_sq += trace.agg_output.back() * trace.agg_output.back();
  }
  const double mean = sum / reps;
  const double var = sum_sq / reps - mean * mean;
  // Mean of a Bernoulli(1/2) fraction over 5000 agents: se ~ 0.007/sqrt(8).
  CHECK(std::abs(mean - 0.5) <= 5.0 * 0.5 / std::sqrt(5000.0 * reps));
  CHECK(var <= 10.0 * 0.25 / 5000.0);
}
