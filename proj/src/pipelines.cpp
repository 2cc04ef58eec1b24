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

#include "mfctl/pipelines.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

#include "mfctl/linear_model.hpp"
#include "mfctl/twist.hpp"

namespace mfctl {

namespace {

std::string in_dir(const std::string &out_dir, const std::string &file) {
  std::filesystem::create_directories(out_dir);
  return (std::filesystem::path(out_dir) / file).string();
}

void write_text(const std::string &path, const std::string &text) {
  std::ofstream out(path);
  if (!out)
    throw input_error("cannot open '" + path + "' for writing");
  out << text;
}

void write_zeros_csv(const std::string &path,
                     const std::vector<std::complex<double>> &zeros) {
  CsvWriter csv(path, {"re", "im"});
  for (const auto &z : zeros)
    csv.row({z.real(), z.imag()});
}

} // namespace

int run_analyze(const ModelInstance &model, int omega_points, double pr_tol,
                const std::string &out_dir) {
  VerifyReport report;
  const ReversibilityReport rev = is_reversible(model.gen, model.pi);

  LinearModel lm;
  try {
    lm = build_linear_model(model.gen, model.pi, model.util);
  } catch (const Error &e) {
    if (e.kind() == ErrorKind::cross_check) {
      write_text(in_dir(out_dir, "report.txt"),
                 std::string("cross-check failure: ") + e.what() + "\n");
      return 3;
    }
    throw;
  }

  // linear_model.csv: labeled blocks A, B, C, baseline.
  {
    const int d = model.gen.dim();
    CsvWriter csv(in_dir(out_dir, "linear_model.csv"),
                  [&] {
                    std::vector<std::string> h{"block", "row"};
                    for (int j = 0; j < d; ++j)
                      h.push_back("col_" + std::to_string(j + 1));
                    return h;
                  }());
    auto emit = [&](double block, int row, const Eigen::VectorXd &vals) {
      std::vector<double> r{block, static_cast<double>(row)};
      for (int j = 0; j < d; ++j)
        r.push_back(vals(j));
      csv.row(r);
    };
    for (int i = 0; i < d; ++i)
      emit(0, i, lm.a.row(i)); // block 0: A
    emit(1, 0, lm.b);          // block 1: B
    emit(2, 0, lm.c);          // block 2: C
    Eigen::VectorXd base = Eigen::VectorXd::Zero(d);
    base(0) = lm.baseline;
    emit(3, 0, base); // block 3: baseline in the first column
  }

  const FrequencyResponse fr =
      frequency_response(lm, default_omega_grid(model.gen, omega_points));
  {
    CsvWriter csv(in_dir(out_dir, "freq_response.csv"),
                  {"omega", "reG", "imG", "psd", "re_gap"});
    for (std::size_t i = 0; i < fr.omegas.size(); ++i)
      csv.row({fr.omegas[i], fr.g[i].real(), fr.g[i].imag(), fr.psd[i],
               fr.re_gap[i]});
  }

  const std::vector<std::complex<double>> zeros = transmission_zeros(lm);
  write_zeros_csv(in_dir(out_dir, "zeros.csv"), zeros);

  const PositiveRealReport pr = positive_real_check(fr, pr_tol);
  VerifyOptions vo;
  vo.omega_points = omega_points;
  verify_instance(model, vo, "", report);
  write_text(in_dir(out_dir, "report.txt"), render_report(report));

  if (report.cross_check_failure())
    return 3;
  if (rev.reversible && !pr.is_pr)
    return 2;
  return report.exit_code();
}

void run_sweep(const ModelInstance &model, double zeta_min, double zeta_max,
               int points, const std::string &out_dir) {
  if (points < 2 || zeta_max <= zeta_min)
    throw input_error("sweep needs zeta_max > zeta_min and >= 2 points");
  const int d = model.gen.dim();
  std::vector<std::string> header{"zeta", "lambda"};
  for (int i = 0; i < d; ++i)
    header.push_back("v_" + std::to_string(i + 1));
  CsvWriter csv(in_dir(out_dir, "sweep.csv"), header);
  for (int k = 0; k < points; ++k) {
    const double z = zeta_min + k * (zeta_max - zeta_min) / (points - 1);
    const auto [lambda, v] = pf_eigenpair(model.gen, model.util, z);
    std::vector<double> row{z, lambda};
    for (int i = 0; i < d; ++i)
      row.push_back(v(i));
    csv.row(row);
  }
}

void run_simulate_mf(const ModelInstance &model,
                     const SimulateMfOptions &options,
                     const std::string &out_dir) {
  const double gap = spectral_gap(model.gen);
  const double dt = options.dt > 0 ? options.dt : 0.01 / gap;
  const ControlSignal signal = ControlSignal::parse(options.signal);
  const MeanFieldTrajectory mf = integrate_meanfield(
      model.gen, model.util, signal, model.pi.pi, options.t_end, dt,
      options.output_dt);

  const int d = model.gen.dim();
  {
    std::vector<std::string> header{"t", "y"};
    for (int i = 0; i < d; ++i)
      header.push_back("mu_" + std::to_string(i + 1));
    header.push_back("zeta");
    CsvWriter csv(in_dir(out_dir, "meanfield.csv"), header);
    for (std::size_t k = 0; k < mf.times.size(); ++k) {
      std::vector<double> row{mf.times[k], mf.outputs[k]};
      for (int i = 0; i < d; ++i)
        row.push_back(mf.mus[k](i));
      row.push_back(mf.zetas[k]);
      csv.row(row);
    }
  }

  if (options.emit_linearized) {
    const LinearModel lm = build_linear_model(model.gen, model.pi, model.util);
    const LinearTrajectory lin = integrate_linearized(
        lm, signal, Eigen::VectorXd::Zero(d), options.t_end, dt,
        options.output_dt);
    std::vector<std::string> header{"t", "gamma"};
    for (int i = 0; i < d; ++i)
      header.push_back("phi_" + std::to_string(i + 1));
    CsvWriter csv(in_dir(out_dir, "linearized.csv"), header);
    for (std::size_t k = 0; k < lin.times.size(); ++k) {
      std::vector<double> row{lin.times[k], lin.gammas[k]};
      for (int i = 0; i < d; ++i)
        row.push_back(lin.phis[k](i));
      csv.row(row);
    }
  }
}

void run_simulate_agents(const ModelInstance &model,
                         const SimulateAgentsOptions &options,
                         const std::string &out_dir) {
  PopulationOptions popt;
  popt.n_agents = options.n_agents;
  popt.seed = options.seed;
  popt.t_end = options.t_end;
  popt.output_dt = options.output_dt;
  popt.threads = options.threads;
  popt.proportional_init = options.proportional_init;

  const ControlSignal signal = ControlSignal::parse(options.signal);
  const auto start = std::chrono::steady_clock::now();
  const PopulationTrace trace =
      simulate_population(model.gen, model.util, signal, model.pi.pi, popt);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  const int d = model.gen.dim();
  std::vector<std::string> header{"t", "agg_output"};
  for (int i = 0; i < d; ++i)
    header.push_back("empirical_" + std::to_string(i + 1));
  CsvWriter csv(in_dir(out_dir, "population.csv"), header);
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    std::vector<double> row{trace.times[k], trace.agg_output[k]};
    for (int i = 0; i < d; ++i)
      row.push_back(trace.empirical[k](i));
    csv.row(row);
  }

  std::ostringstream meta;
  meta << "n_agents: " << trace.n_agents << "\n"
       << "seed: " << trace.seed << "\n"
       << "theta: " << format_full_precision(trace.theta) << "\n"
       << "signal: " << signal.describe() << "\n"
       << "wall_seconds: " << wall << "\n";
  write_text(in_dir(out_dir, "population_meta.txt"), meta.str());
}

int run_verify(const ModelInstance *model, const VerifyRunOptions &options,
               const std::string &out_dir) {
  if (model == nullptr && options.random_count <= 0)
    throw input_error("verify needs a model or --random-reversible d k");

  VerifyReport report;
  if (model != nullptr)
    verify_instance(*model, options.checks, "model: ", report);
  for (int k = 0; k < options.random_count; ++k) {
    const ModelInstance inst =
        random_reversible_model(options.random_dim, options.seed + k);
    verify_instance(inst, options.checks,
                    "random[" + std::to_string(k + 1) + "]: ", report);
  }
  write_text(in_dir(out_dir, "report.txt"), render_report(report));
  return report.exit_code();
}

int run_counterexample(const CounterexampleOptions &options,
                       const std::string &out_dir) {
  const CounterexampleResult result = counterexample_search(
      directed_cycle_family(options.dim), options.budget, options.seed);

  std::ostringstream report;
  report << "draws: " << result.draws << "\n";
  if (result.best.has_value()) {
    const auto &inst = *result.best;
    const int d = inst.gen.dim();
    {
      std::vector<std::string> header;
      for (int j = 0; j < d; ++j)
        header.push_back("col_" + std::to_string(j + 1));
      CsvWriter csv(in_dir(out_dir, "counterexample_rates.csv"), header);
      for (int i = 0; i < d; ++i) {
        std::vector<double> row(d);
        for (int j = 0; j < d; ++j)
          row[j] = inst.gen.rates(i, j);
        csv.row(row);
      }
    }
    {
      CsvWriter csv(in_dir(out_dir, "counterexample_utility.csv"),
                    {"state", "utility"});
      for (int i = 0; i < d; ++i)
        csv.row({static_cast<double>(i + 1), inst.utility(i)});
    }
    write_zeros_csv(in_dir(out_dir, "zeros.csv"), result.best_zeros);
    report << "min Re G(jw): " << format_full_precision(result.best_min_re_g)
           << " at omega " << format_full_precision(result.best_argmin_omega)
           << "\n";
  }
  report << "positive-real violated: "
         << (result.found_pr_violation ? "yes" : "no") << "\n"
         << "right-half-plane zero found: "
         << (result.found_rhp_zero ? "yes" : "no") << "\n";
  if (result.found_rhp_zero)
    report << "rhp zero: " << format_full_precision(result.rhp_zero.real())
           << " + " << format_full_precision(result.rhp_zero.imag()) << "j\n";
  if (!result.found_pr_violation && !result.found_rhp_zero)
    report << "SearchExhausted: no violation within budget (absence is "
              "informative)\n";
  write_text(in_dir(out_dir, "report.txt"), report.str());
  return 0;
}

} // namespace mfctl
