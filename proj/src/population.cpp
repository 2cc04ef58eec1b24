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

#include "mfctl/population.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <vector>

#include "mfctl/rng.hpp"

namespace mfctl {

namespace {

// Agents are processed in fixed-size chunks; each chunk accumulates integer
// state counts per output time. Chunk results are merged in chunk order, so
// the totals are identical for any thread count.
constexpr long kChunk = 1024;

struct ChunkCounts {
  std::vector<std::int64_t> counts; // n_times * d, row-major by time
};

std::vector<double> initial_cdf(const Eigen::VectorXd &mu0) {
  std::vector<double> cdf(mu0.size());
  double acc = 0.0;
  for (int i = 0; i < mu0.size(); ++i) {
    acc += std::max(0.0, mu0(i));
    cdf[i] = acc;
  }
  for (auto &c : cdf)
    c /= acc;
  cdf.back() = 1.0;
  return cdf;
}

int sample_cdf(const std::vector<double> &cdf, double u) {
  return static_cast<int>(
      std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
}

// Largest-remainder assignment of N agents to states in proportion mu0;
// agent index -> state, in state-major order.
std::vector<int> proportional_assignment(const Eigen::VectorXd &mu0, long n) {
  const int d = static_cast<int>(mu0.size());
  std::vector<long> quota(d);
  std::vector<std::pair<double, int>> remainders(d);
  long assigned = 0;
  for (int i = 0; i < d; ++i) {
    const double exact = mu0(i) * n;
    quota[i] = static_cast<long>(std::floor(exact));
    remainders[i] = {exact - quota[i], i};
    assigned += quota[i];
  }
  std::sort(remainders.begin(), remainders.end(),
            [](const auto &a, const auto &b) {
              return a.first != b.first ? a.first > b.first
                                        : a.second < b.second;
            });
  for (long k = 0; k < n - assigned; ++k)
    ++quota[remainders[k % d].second];
  std::vector<int> states;
  states.reserve(n);
  for (int i = 0; i < d; ++i)
    states.insert(states.end(), quota[i], i);
  return states;
}

} // namespace

PopulationTrace simulate_population(const GeneratorMatrix &gen,
                                    const UtilityFunction &util,
                                    const ControlSignal &signal,
                                    const Eigen::VectorXd &mu0,
                                    const PopulationOptions &options,
                                    const TwistTable *table) {
  const int d = gen.dim();
  if (options.n_agents < 1)
    throw input_error("need at least one agent");
  if (options.t_end <= 0 || options.output_dt <= 0)
    throw input_error("need t_end > 0 and output_dt > 0");
  if (static_cast<int>(mu0.size()) != d || mu0.minCoeff() < -1e-12 ||
      std::abs(mu0.sum() - 1.0) > 1e-9)
    throw input_error("mu0 is not a probability vector");

  // Dominating rate from the signal's range over [0, t_end].
  std::unique_ptr<TwistTable> owned_table;
  if (table == nullptr) {
    auto [lo, hi] = signal.range(options.t_end);
    const double pad = 1e-6 + 1e-3 * (hi - lo);
    owned_table = std::make_unique<TwistTable>(gen, util, lo - pad, hi + pad);
    table = owned_table.get();
  }
  const double theta = 1.05 * std::max(table->max_exit_rate(),
                                       gen.rates.diagonal().cwiseAbs().maxCoeff());

  const long n_times =
      std::lround(std::floor(options.t_end / options.output_dt + 1e-9)) + 1;
  std::vector<double> times(n_times);
  for (long k = 0; k < n_times; ++k)
    times[k] = std::min(k * options.output_dt, options.t_end);

  const std::vector<double> cdf = initial_cdf(mu0);
  std::vector<int> fixed_init;
  if (options.proportional_init)
    fixed_init = proportional_assignment(mu0, options.n_agents);

  const long n_chunks = (options.n_agents + kChunk - 1) / kChunk;
  std::vector<ChunkCounts> chunks(n_chunks);

  std::atomic<long> next_chunk{0};
  std::mutex error_mutex;
  std::string error_message;

  auto worker = [&]() {
    Eigen::MatrixXd local_rates(d, d);
    for (;;) {
      const long chunk = next_chunk.fetch_add(1);
      if (chunk >= n_chunks || !error_message.empty())
        return;
      const long begin = chunk * kChunk;
      const long end = std::min(options.n_agents, begin + kChunk);
      auto &counts = chunks[chunk].counts;
      counts.assign(static_cast<std::size_t>(n_times) * d, 0);
      try {
        for (long agent = begin; agent < end; ++agent) {
          Rng rng(options.seed, static_cast<std::uint64_t>(agent));
          int state = options.proportional_init
                          ? fixed_init[agent]
                          : sample_cdf(cdf, rng.uniform());
          double t = 0.0;
          long next_record = 0;
          for (;;) {
            const double t_next = t + rng.exponential(theta);
            while (next_record < n_times && times[next_record] < t_next) {
              counts[next_record * d + state] += 1;
              ++next_record;
            }
            if (next_record >= n_times)
              break;
            t = t_next;
            if (t > options.t_end)
              continue; // records exhausted above; defensive
            table->rates_at(signal(t), local_rates);
            if (-local_rates(state, state) > theta) {
              std::ostringstream os;
              os << "RateBoundExceeded: exit rate "
                 << -local_rates(state, state) << " > Theta " << theta
                 << " at t = " << t << ", state " << state;
              throw internal_error(os.str());
            }
            // Thinning: jump to x' with probability D(x,x')/Theta.
            double u = rng.uniform() * theta;
            double acc = 0.0;
            for (int j = 0; j < d; ++j) {
              if (j == state)
                continue;
              acc += local_rates(state, j);
              if (u < acc) {
                state = j;
                break;
              }
            }
          }
        }
      } catch (const Error &e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (error_message.empty())
          error_message = e.what();
        return;
      }
    }
  };

  const int n_threads = std::max(1, options.threads);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i)
      pool.emplace_back(worker);
    for (auto &t : pool)
      t.join();
  }
  if (!error_message.empty())
    throw internal_error(error_message);

  // Merge integer counts in chunk order.
  std::vector<std::int64_t> totals(static_cast<std::size_t>(n_times) * d, 0);
  for (const auto &chunk : chunks)
    for (std::size_t i = 0; i < totals.size(); ++i)
      totals[i] += chunk.counts[i];

  PopulationTrace trace;
  trace.times = std::move(times);
  trace.n_agents = options.n_agents;
  trace.seed = options.seed;
  trace.theta = theta;
  trace.empirical.reserve(n_times);
  trace.agg_output.reserve(n_times);
  for (long k = 0; k < n_times; ++k) {
    Eigen::VectorXd freq(d);
    for (int i = 0; i < d; ++i)
      freq(i) = static_cast<double>(totals[k * d + i]) / options.n_agents;
    trace.agg_output.push_back(util.values.dot(freq));
    trace.empirical.push_back(std::move(freq));
  }
  return trace;
}

MeanFieldGap meanfield_gap(const PopulationTrace &trace,
                           const MeanFieldTrajectory &mf) {
  if (trace.times.size() != mf.times.size())
    throw input_error("GridMismatch: trace and trajectory sizes differ");
  for (std::size_t i = 0; i < trace.times.size(); ++i)
    if (std::abs(trace.times[i] - mf.times[i]) > 1e-9)
      throw input_error("GridMismatch: time grids differ at index " +
                        std::to_string(i));
  MeanFieldGap gap;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    gap.sup_l1 = std::max(gap.sup_l1,
                          (trace.empirical[i] - mf.mus[i]).lpNorm<1>());
    gap.sup_output = std::max(gap.sup_output,
                              std::abs(trace.agg_output[i] - mf.outputs[i]));
  }
  return gap;
}

} // namespace mfctl
