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

#include "mfctl.h"

#include <cstring>
#include <string>

#include "mfctl/linear_model.hpp"
#include "mfctl/pipelines.hpp"
#include "mfctl/twist.hpp"

namespace {

thread_local std::string g_last_error;

mfctl_status to_status(mfctl::ErrorKind kind) {
  switch (kind) {
  case mfctl::ErrorKind::invalid_input:
    return MFCTL_ERR_INPUT;
  case mfctl::ErrorKind::identity_violation:
    return MFCTL_ERR_IDENTITY;
  case mfctl::ErrorKind::cross_check:
    return MFCTL_ERR_CROSS_CHECK;
  case mfctl::ErrorKind::internal:
    return MFCTL_ERR_INTERNAL;
  }
  return MFCTL_ERR_INTERNAL;
}

template <typename Fn> mfctl_status guarded(Fn &&fn) {
  try {
    return fn();
  } catch (const mfctl::Error &e) {
    g_last_error = e.what();
    return to_status(e.kind());
  } catch (const std::exception &e) {
    g_last_error = e.what();
    return MFCTL_ERR_INTERNAL;
  }
}

mfctl_status require(bool condition, const char *message) {
  if (condition)
    return MFCTL_OK;
  g_last_error = message;
  return MFCTL_ERR_INPUT;
}

} // namespace

struct mfctl_model {
  mfctl::ModelInstance instance;
};

extern "C" {

const char *mfctl_last_error(void) { return g_last_error.c_str(); }

mfctl_status mfctl_model_create(int dim, const double *rates,
                                const double *utility,
                                const char *const *labels,
                                mfctl_model **out) {
  if (auto s = require(out && rates && utility && dim > 0, "null argument"))
    return s;
  return guarded([&] {
    Eigen::MatrixXd m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        m(i, j) = rates[i * dim + j];
    Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(utility, dim);
    std::vector<std::string> names;
    if (labels != nullptr)
      for (int i = 0; i < dim; ++i)
        names.emplace_back(labels[i]);
    *out = new mfctl_model{mfctl::make_model(m, u, std::move(names))};
    return MFCTL_OK;
  });
}

mfctl_status mfctl_model_load(const char *path, mfctl_model **out) {
  if (auto s = require(out && path, "null argument"))
    return s;
  return guarded([&] {
    *out = new mfctl_model{mfctl::load_model_config(path)};
    return MFCTL_OK;
  });
}

mfctl_status mfctl_model_random_reversible(int dim, uint64_t seed,
                                           double edge_density,
                                           mfctl_model **out) {
  if (auto s = require(out != nullptr, "null output"))
    return s;
  return guarded([&] {
    *out = new mfctl_model{mfctl::random_reversible_model(dim, seed,
                                                          edge_density)};
    return MFCTL_OK;
  });
}

void mfctl_model_free(mfctl_model *model) { delete model; }

int mfctl_model_dim(const mfctl_model *model) {
  return model ? model->instance.gen.dim() : 0;
}

const char *mfctl_model_label(const mfctl_model *model, int state) {
  if (!model || state < 0 || state >= model->instance.gen.dim())
    return nullptr;
  return model->instance.gen.state_labels[state].c_str();
}

mfctl_status mfctl_model_rates(const mfctl_model *model, double *rates_out) {
  if (auto s = require(model && rates_out, "null argument"))
    return s;
  const int d = model->instance.gen.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      rates_out[i * d + j] = model->instance.gen.rates(i, j);
  return MFCTL_OK;
}

mfctl_status mfctl_model_utility(const mfctl_model *model, double *util_out) {
  if (auto s = require(model && util_out, "null argument"))
    return s;
  const int d = model->instance.gen.dim();
  for (int i = 0; i < d; ++i)
    util_out[i] = model->instance.util.values(i);
  return MFCTL_OK;
}

mfctl_status mfctl_stationary(const mfctl_model *model, double *pi_out) {
  if (auto s = require(model && pi_out, "null argument"))
    return s;
  const int d = model->instance.gen.dim();
  for (int i = 0; i < d; ++i)
    pi_out[i] = model->instance.pi.pi(i);
  return MFCTL_OK;
}

mfctl_status mfctl_reversibility(const mfctl_model *model, double tol,
                                 int *reversible_out, double *violation_out) {
  if (auto s = require(model != nullptr, "null model"))
    return s;
  return guarded([&] {
    const auto rep = mfctl::is_reversible(model->instance.gen,
                                          model->instance.pi,
                                          tol > 0 ? tol : -1.0);
    if (reversible_out)
      *reversible_out = rep.reversible ? 1 : 0;
    if (violation_out)
      *violation_out = rep.max_violation;
    return MFCTL_OK;
  });
}

mfctl_status mfctl_spectral_gap(const mfctl_model *model, double *gap_out) {
  if (auto s = require(model && gap_out, "null argument"))
    return s;
  return guarded([&] {
    *gap_out = mfctl::spectral_gap(model->instance.gen);
    return MFCTL_OK;
  });
}

mfctl_status mfctl_poisson(const mfctl_model *model, double *h0_out) {
  if (auto s = require(model && h0_out, "null argument"))
    return s;
  return guarded([&] {
    const Eigen::VectorXd h0 = mfctl::poisson_solve(
        model->instance.gen, model->instance.pi, model->instance.util);
    for (int i = 0; i < h0.size(); ++i)
      h0_out[i] = h0(i);
    return MFCTL_OK;
  });
}

mfctl_status mfctl_autocovariance(const mfctl_model *model, double t,
                                  double *out) {
  if (auto s = require(model && out, "null argument"))
    return s;
  return guarded([&] {
    *out = mfctl::autocovariance(model->instance.gen, model->instance.pi,
                                 model->instance.util, t);
    return MFCTL_OK;
  });
}

mfctl_status mfctl_psd(const mfctl_model *model, double omega, double *out) {
  if (auto s = require(model && out, "null argument"))
    return s;
  return guarded([&] {
    *out = mfctl::psd(model->instance.gen, model->instance.pi,
                      model->instance.util, omega);
    return MFCTL_OK;
  });
}

mfctl_status mfctl_pf_eigenpair(const mfctl_model *model, double zeta,
                                double *lambda_out, double *v_out) {
  if (auto s = require(model != nullptr, "null model"))
    return s;
  return guarded([&] {
    const auto [lambda, v] =
        mfctl::pf_eigenpair(model->instance.gen, model->instance.util, zeta);
    if (lambda_out)
      *lambda_out = lambda;
    if (v_out)
      for (int i = 0; i < v.size(); ++i)
        v_out[i] = v(i);
    return MFCTL_OK;
  });
}

mfctl_status mfctl_twisted_rates(const mfctl_model *model, double zeta,
                                 double *rates_out) {
  if (auto s = require(model && rates_out, "null argument"))
    return s;
  return guarded([&] {
    const auto fam = mfctl::twisted_generator(model->instance.gen,
                                              model->instance.util, zeta);
    const int d = model->instance.gen.dim();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        rates_out[i * d + j] = fam.twisted.rates(i, j);
    return MFCTL_OK;
  });
}

mfctl_status mfctl_linear_model(const mfctl_model *model, double *a_out,
                                double *b_out, double *c_out,
                                double *baseline_out) {
  if (auto s = require(model != nullptr, "null model"))
    return s;
  return guarded([&] {
    const auto lm = mfctl::build_linear_model(
        model->instance.gen, model->instance.pi, model->instance.util);
    const int d = model->instance.gen.dim();
    if (a_out)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          a_out[i * d + j] = lm.a(i, j);
    if (b_out)
      for (int i = 0; i < d; ++i)
        b_out[i] = lm.b(i);
    if (c_out)
      for (int i = 0; i < d; ++i)
        c_out[i] = lm.c(i);
    if (baseline_out)
      *baseline_out = lm.baseline;
    return MFCTL_OK;
  });
}

mfctl_status mfctl_transfer(const mfctl_model *model, double re_s,
                            double im_s, double *re_g_out, double *im_g_out) {
  if (auto s = require(model != nullptr, "null model"))
    return s;
  return guarded([&] {
    const auto lm = mfctl::build_linear_model(
        model->instance.gen, model->instance.pi, model->instance.util);
    const std::complex<double> g =
        mfctl::transfer_function(lm, {re_s, im_s});
    if (re_g_out)
      *re_g_out = g.real();
    if (im_g_out)
      *im_g_out = g.imag();
    return MFCTL_OK;
  });
}

mfctl_status mfctl_analyze(const mfctl_model *model,
                           const mfctl_analyze_opts *opts,
                           const char *out_dir) {
  if (auto s = require(model && out_dir, "null argument"))
    return s;
  return guarded([&] {
    const int points = (opts && opts->omega_points > 0) ? opts->omega_points
                                                        : 400;
    const double tol = (opts && opts->pr_tol > 0) ? opts->pr_tol : 1e-10;
    const int code = mfctl::run_analyze(model->instance, points, tol, out_dir);
    if (code == 2) {
      g_last_error = "positive-real condition violated";
      return MFCTL_ERR_IDENTITY;
    }
    if (code == 3) {
      g_last_error = "internal cross-check failed";
      return MFCTL_ERR_CROSS_CHECK;
    }
    return MFCTL_OK;
  });
}

mfctl_status mfctl_sweep(const mfctl_model *model, double zeta_min,
                         double zeta_max, int points, const char *out_dir) {
  if (auto s = require(model && out_dir, "null argument"))
    return s;
  return guarded([&] {
    mfctl::run_sweep(model->instance, zeta_min, zeta_max, points, out_dir);
    return MFCTL_OK;
  });
}

mfctl_status mfctl_simulate_mf(const mfctl_model *model,
                               const mfctl_simulate_mf_opts *opts,
                               const char *out_dir) {
  if (auto s = require(model && opts && opts->signal && out_dir,
                       "null argument"))
    return s;
  return guarded([&] {
    mfctl::SimulateMfOptions o;
    o.signal = opts->signal;
    o.t_end = opts->t_end;
    o.dt = opts->dt;
    o.output_dt = opts->output_dt;
    o.emit_linearized = opts->emit_linearized != 0;
    mfctl::run_simulate_mf(model->instance, o, out_dir);
    return MFCTL_OK;
  });
}

mfctl_status mfctl_simulate_agents(const mfctl_model *model,
                                   const mfctl_simulate_agents_opts *opts,
                                   const char *out_dir) {
  if (auto s = require(model && opts && opts->signal && out_dir,
                       "null argument"))
    return s;
  return guarded([&] {
    mfctl::SimulateAgentsOptions o;
    o.signal = opts->signal;
    o.n_agents = opts->n_agents;
    o.seed = opts->seed;
    o.t_end = opts->t_end;
    o.output_dt = opts->output_dt;
    o.threads = opts->threads > 0 ? opts->threads : 1;
    o.proportional_init = opts->proportional_init != 0;
    mfctl::run_simulate_agents(model->instance, o, out_dir);
    return MFCTL_OK;
  });
}

mfctl_status mfctl_verify(const mfctl_model *model,
                          const mfctl_verify_opts *opts,
                          const char *out_dir) {
  if (auto s = require(out_dir != nullptr, "null out_dir"))
    return s;
  return guarded([&] {
    mfctl::VerifyRunOptions o;
    if (opts) {
      o.random_dim = opts->random_dim;
      o.random_count = opts->random_count;
      o.seed = opts->seed;
      if (opts->zeta_max > opts->zeta_min) {
        o.checks.zeta_min = opts->zeta_min;
        o.checks.zeta_max = opts->zeta_max;
      }
      if (opts->zeta_points > 0)
        o.checks.zeta_points = opts->zeta_points;
      if (opts->omega_points > 0)
        o.checks.omega_points = opts->omega_points;
    }
    const int code = mfctl::run_verify(
        model ? &model->instance : nullptr, o, out_dir);
    if (code == 2) {
      g_last_error = "a model-identity check failed; see report.txt";
      return MFCTL_ERR_IDENTITY;
    }
    if (code == 3) {
      g_last_error = "an internal cross-check failed; see report.txt";
      return MFCTL_ERR_CROSS_CHECK;
    }
    return MFCTL_OK;
  });
}

mfctl_status mfctl_counterexample(const mfctl_counterexample_opts *opts,
                                  const char *out_dir) {
  if (auto s = require(out_dir != nullptr, "null out_dir"))
    return s;
  return guarded([&] {
    mfctl::CounterexampleOptions o;
    if (opts) {
      if (opts->dim > 0)
        o.dim = opts->dim;
      if (opts->budget > 0)
        o.budget = opts->budget;
      o.seed = opts->seed;
    }
    mfctl::run_counterexample(o, out_dir);
    return MFCTL_OK;
  });
}

} // extern "C"
