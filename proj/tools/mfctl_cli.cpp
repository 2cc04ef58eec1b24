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

// mfctl command-line tool. Exit codes: 0 all checks pass, 2 a model
// identity was violated, 3 an internal cross-check failed, 4 input error.

#include <cstdint>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mfctl.h"

namespace {

struct ModelDeleter {
  void operator()(mfctl_model *m) const { mfctl_model_free(m); }
};
using ModelPtr = std::unique_ptr<mfctl_model, ModelDeleter>;

int fail(mfctl_status status) {
  std::fprintf(stderr, "error: %s\n", mfctl_last_error());
  // MFCTL_ERR_INTERNAL (5) has no CLI exit code of its own; report it as
  // an internal cross-check class failure.
  return status == MFCTL_ERR_INTERNAL ? 3 : static_cast<int>(status);
}

// "min:max:points", e.g. "-2:2:41".
bool parse_grid(const std::string &text, double &lo, double &hi, int &n) {
  const auto a = text.find(':');
  const auto b = text.rfind(':');
  if (a == std::string::npos || b == a)
    return false;
  try {
    lo = std::stod(text.substr(0, a));
    hi = std::stod(text.substr(a + 1, b - a - 1));
    n = std::stoi(text.substr(b + 1));
  } catch (const std::exception &) {
    return false;
  }
  return n >= 2 && hi > lo;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"KL-optimal control of finite-state Markov processes: "
               "twisted generators, mean-field linearization, "
               "frequency-domain identities and N-agent simulation"};
  app.require_subcommand(1);

  std::string model_path;
  std::string out_dir;
  if (const char *env = std::getenv("MFCTL_OUT_DIR"))
    out_dir = env;
  if (out_dir.empty())
    out_dir = ".";
  app.add_option("--model", model_path,
                 "Model config file (JSON or key-value)");
  app.add_option("--out", out_dir,
                 "Output directory (default: $MFCTL_OUT_DIR or .)");

  // analyze
  auto *analyze = app.add_subcommand(
      "analyze", "Linearized model, frequency response, transmission zeros");
  int omega_points = 400;
  double pr_tol = 1e-10;
  analyze->add_option("--omega-points", omega_points,
                      "Frequency grid size (mirrored log grid)");
  analyze->add_option("--pr-tol", pr_tol,
                      "Positive-realness tolerance on min Re G(jw)");

  // sweep
  auto *sweep = app.add_subcommand(
      "sweep", "Eigenvalue and eigenvector sweep over a zeta grid");
  std::string sweep_grid = "-2:2:41";
  sweep->add_option("--zeta-grid", sweep_grid, "Grid as min:max:points");

  // simulate-mf
  auto *sim_mf = app.add_subcommand(
      "simulate-mf", "Deterministic mean-field trajectory under a signal");
  std::string mf_signal = "const:0";
  double mf_t_end = 10.0, mf_dt = 0.0, mf_output_dt = 0.0;
  bool mf_linearized = false;
  sim_mf->add_option("--signal", mf_signal,
                     "const:c | sin:amp,omega[,offset] | pwc:t0=v0,t1=v1,..");
  sim_mf->add_option("--t-end", mf_t_end, "Horizon");
  sim_mf->add_option("--dt", mf_dt, "RK4 step (default 0.01/spectral gap)");
  sim_mf->add_option("--output-dt", mf_output_dt,
                     "Recording interval (default: every step)");
  sim_mf->add_flag("--linearized", mf_linearized,
                   "Also integrate the linearized model");

  // simulate-agents
  auto *sim_ag = app.add_subcommand(
      "simulate-agents", "N-agent stochastic simulation via uniformization");
  std::string ag_signal = "const:0";
  long agents = 1000;
  std::uint64_t ag_seed = 0;
  double ag_t_end = 10.0, ag_output_dt = 0.1;
  int threads = 1;
  bool proportional_init = false;
  sim_ag->add_option("--signal", ag_signal, "Control signal spec");
  sim_ag->add_option("--agents", agents, "Number of agents N");
  sim_ag->add_option("--seed", ag_seed, "RNG seed");
  sim_ag->add_option("--t-end", ag_t_end, "Horizon");
  sim_ag->add_option("--output-dt", ag_output_dt, "Recording interval");
  sim_ag->add_option("--threads", threads, "Worker threads");
  sim_ag->add_flag("--proportional-init", proportional_init,
                   "Initialize agents proportionally to the stationary law");

  // verify
  auto *verify = app.add_subcommand(
      "verify", "Consolidated identity/cross-check residual report");
  std::vector<int> random_reversible;
  std::uint64_t verify_seed = 1;
  std::string verify_grid = "-2:2:41";
  int verify_omega_points = 400;
  verify
      ->add_option("--random-reversible", random_reversible,
                   "Also check k random reversible d-state instances: d k")
      ->expected(2);
  verify->add_option("--seed", verify_seed, "Seed for the random suite");
  verify->add_option("--zeta-grid", verify_grid, "Grid as min:max:points");
  verify->add_option("--omega-points", verify_omega_points,
                     "Frequency grid size");

  // counterexample
  auto *counter = app.add_subcommand(
      "counterexample",
      "Search non-reversible models for positive-realness failures");
  int ce_dim = 8, ce_budget = 500;
  std::uint64_t ce_seed = 7;
  counter->add_option("--dim", ce_dim, "State count of the search family");
  counter->add_option("--budget", ce_budget, "Number of random draws");
  counter->add_option("--seed", ce_seed, "Search seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 4;
  }

  ModelPtr model;
  if (!model_path.empty()) {
    mfctl_model *raw = nullptr;
    if (const auto s = mfctl_model_load(model_path.c_str(), &raw))
      return fail(s);
    model.reset(raw);
  }

  if (analyze->parsed()) {
    if (!model) {
      std::fprintf(stderr, "error: analyze requires --model\n");
      return 4;
    }
    mfctl_analyze_opts opts{omega_points, pr_tol};
    if (const auto s = mfctl_analyze(model.get(), &opts, out_dir.c_str()))
      return fail(s);
    return 0;
  }

  if (sweep->parsed()) {
    if (!model) {
      std::fprintf(stderr, "error: sweep requires --model\n");
      return 4;
    }
    double lo, hi;
    int n;
    if (!parse_grid(sweep_grid, lo, hi, n)) {
      std::fprintf(stderr, "error: bad --zeta-grid '%s'\n",
                   sweep_grid.c_str());
      return 4;
    }
    if (const auto s = mfctl_sweep(model.get(), lo, hi, n, out_dir.c_str()))
      return fail(s);
    return 0;
  }

  if (sim_mf->parsed()) {
    if (!model) {
      std::fprintf(stderr, "error: simulate-mf requires --model\n");
      return 4;
    }
    mfctl_simulate_mf_opts opts{mf_signal.c_str(), mf_t_end, mf_dt,
                                mf_output_dt, mf_linearized ? 1 : 0};
    if (const auto s = mfctl_simulate_mf(model.get(), &opts, out_dir.c_str()))
      return fail(s);
    return 0;
  }

  if (sim_ag->parsed()) {
    if (!model) {
      std::fprintf(stderr, "error: simulate-agents requires --model\n");
      return 4;
    }
    mfctl_simulate_agents_opts opts{ag_signal.c_str(), agents,      ag_seed,
                                    ag_t_end,          ag_output_dt, threads,
                                    proportional_init ? 1 : 0};
    if (const auto s =
            mfctl_simulate_agents(model.get(), &opts, out_dir.c_str()))
      return fail(s);
    return 0;
  }

  if (verify->parsed()) {
    mfctl_verify_opts opts{};
    opts.seed = verify_seed;
    opts.omega_points = verify_omega_points;
    if (!parse_grid(verify_grid, opts.zeta_min, opts.zeta_max,
                    opts.zeta_points)) {
      std::fprintf(stderr, "error: bad --zeta-grid '%s'\n",
                   verify_grid.c_str());
      return 4;
    }
    if (!random_reversible.empty()) {
      opts.random_dim = random_reversible[0];
      opts.random_count = random_reversible[1];
    }
    if (!model && random_reversible.empty()) {
      std::fprintf(stderr,
                   "error: verify requires --model or --random-reversible\n");
      return 4;
    }
    if (const auto s = mfctl_verify(model.get(), &opts, out_dir.c_str()))
      return fail(s);
    return 0;
  }

  if (counter->parsed()) {
    mfctl_counterexample_opts opts{ce_dim, ce_budget, ce_seed};
    if (const auto s = mfctl_counterexample(&opts, out_dir.c_str()))
      return fail(s);
    return 0;
  }

  return 4;
}
