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

#include "mfctl/verify.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "mfctl/linear_model.hpp"
#include "mfctl/twist.hpp"

namespace mfctl {

bool VerifyReport::identity_failure() const {
  for (const auto &c : checks)
    if (c.applicable && !c.passed && !c.cross_check)
      return true;
  return false;
}

bool VerifyReport::cross_check_failure() const {
  for (const auto &c : checks)
    if (c.applicable && !c.passed && c.cross_check)
      return true;
  return false;
}

int VerifyReport::exit_code() const {
  if (cross_check_failure())
    return 3;
  if (identity_failure())
    return 2;
  return 0;
}

namespace {

CheckResult make_check(const std::string &name, double residual, double tol,
                       const std::string &note = "", bool cross = false) {
  CheckResult c;
  c.name = name;
  c.residual = residual;
  c.tol = tol;
  c.passed = residual <= tol;
  c.cross_check = cross;
  c.note = note;
  return c;
}

CheckResult not_applicable(const std::string &name, const std::string &note) {
  CheckResult c;
  c.name = name;
  c.applicable = false;
  c.note = note;
  return c;
}

} // namespace

void verify_instance(const ModelInstance &model, const VerifyOptions &options,
                     const std::string &tag, VerifyReport &report) {
  const auto &gen = model.gen;
  const auto &pi = model.pi;
  const auto &util = model.util;
  auto name = [&tag](const std::string &check) { return tag + check; };

  // Foundations.
  report.checks.push_back(make_check(
      name("stationarity pi*D = 0"),
      (gen.rates.transpose() * pi.pi).cwiseAbs().maxCoeff(), 1e-10));

  const ReversibilityReport rev = is_reversible(gen, pi);
  {
    CheckResult c;
    c.name = name("reversibility (informative)");
    c.residual = rev.max_violation;
    c.tol = rev.tol;
    c.passed = true; // reported, never a failure
    c.note = rev.reversible ? "reversible" : "non-reversible";
    report.checks.push_back(c);
  }

  const GeneratorMatrix star = time_reversal(gen, pi);
  report.checks.push_back(make_check(
      name("time reversal preserves pi"),
      (star.rates.transpose() * pi.pi).cwiseAbs().maxCoeff(), 1e-10));

  // Linear model and its two B routes.
  LinearModel lm;
  try {
    lm = build_linear_model(gen, pi, util, options.fd_step);
  } catch (const Error &e) {
    CheckResult c;
    c.name = name("B closed-form vs finite-difference");
    c.residual = HUGE_VAL;
    c.tol = 1e-6;
    c.passed = false;
    c.cross_check = true;
    c.note = e.what();
    report.checks.push_back(c);
    return;
  }
  report.checks.push_back(make_check(
      name("B closed-form vs finite-difference"),
      (lm.b_closed_form - lm.b_finite_diff).cwiseAbs().maxCoeff(), 1e-6, "",
      true));
  report.checks.push_back(
      make_check(name("sum_j B_j = 0"), std::abs(lm.b.sum()), 1e-9));

  if (rev.reversible) {
    const Eigen::VectorXd shortcut =
        2.0 * (pi.pi.array() * util.centered.array()).matrix();
    report.checks.push_back(
        make_check(name("reversible shortcut B = 2 pi.C"),
                   (lm.b - shortcut).cwiseAbs().maxCoeff(), 1e-9));
  }

  // Derivatives at the origin (log-MGF and eigenvector).
  const DerivativeCheck dl = lmgf_derivative_check(gen, pi, util,
                                                   options.fd_step);
  report.checks.push_back(
      make_check(name("dLambda/dzeta(0) = ybar"),
                 std::abs(dl.finite_difference - dl.analytic), 1e-7));
  const VectorDerivativeCheck dv =
      eigenvector_derivative_check(gen, pi, util, options.fd_step);
  report.checks.push_back(make_check(
      name("dv/dzeta(0) = h0"),
      (dv.finite_difference - dv.analytic).cwiseAbs().maxCoeff(), 1e-6));

  const Eigen::VectorXd h0 = poisson_solve(gen, pi, util);
  report.checks.push_back(
      make_check(name("Poisson residual D h0 + util~"),
                 (gen.rates * h0 + util.centered).cwiseAbs().maxCoeff(),
                 1e-10));

  // Twisted family over the zeta grid.
  double worst_rowsum = 0.0, worst_offdiag = 0.0, worst_support = 0.0;
  double worst_convexity = 0.0, worst_jensen = 0.0, worst_rev = 0.0;
  std::vector<double> lambdas;
  const int nz = std::max(3, options.zeta_points);
  for (int k = 0; k < nz; ++k) {
    const double z = options.zeta_min +
                     k * (options.zeta_max - options.zeta_min) / (nz - 1);
    const TwistedFamily fam = twisted_generator(gen, util, z);
    lambdas.push_back(fam.eigenvalue);
    worst_rowsum = std::max(
        worst_rowsum, fam.twisted.rates.rowwise().sum().cwiseAbs().maxCoeff());
    worst_offdiag = std::max(worst_offdiag,
                             -(fam.twisted.rates -
                               fam.twisted.rates.diagonal().asDiagonal().toDenseMatrix())
                                  .minCoeff());
    for (int i = 0; i < gen.dim(); ++i)
      for (int j = 0; j < gen.dim(); ++j)
        if (i != j) {
          const bool base = gen.rates(i, j) > kStructuralZero;
          const bool tw = fam.twisted.rates(i, j) > kStructuralZero;
          if (base != tw)
            worst_support = 1.0;
        }
    worst_jensen = std::max(worst_jensen, z * util.baseline - fam.eigenvalue);
    if (rev.reversible) {
      const StationaryDistribution tpi = stationary_distribution(fam.twisted);
      worst_rev = std::max(
          worst_rev, is_reversible(fam.twisted, tpi, 1e-9).max_violation);
    }
  }
  for (std::size_t k = 1; k + 1 < lambdas.size(); ++k)
    worst_convexity = std::max(
        worst_convexity, -(lambdas[k + 1] - 2 * lambdas[k] + lambdas[k - 1]));

  report.checks.push_back(
      make_check(name("D_zeta row sums"), worst_rowsum, 1e-10));
  report.checks.push_back(
      make_check(name("D_zeta off-diagonals >= 0"), worst_offdiag, 0.0));
  report.checks.push_back(
      make_check(name("D_zeta support preserved"), worst_support, 0.0));
  report.checks.push_back(
      make_check(name("Lambda_zeta convexity"), worst_convexity, 1e-8));
  report.checks.push_back(
      make_check(name("Jensen Lambda_zeta >= zeta*ybar"), worst_jensen, 1e-10));
  if (rev.reversible)
    report.checks.push_back(make_check(
        name("D_zeta inherits reversibility"), worst_rev, 1e-9));
  else
    report.checks.push_back(not_applicable(
        name("D_zeta inherits reversibility"),
        "not applicable (non-reversible)"));

  // Frequency domain.
  const FrequencyResponse fr =
      frequency_response(lm, default_omega_grid(gen, options.omega_points));
  const PositiveRealReport pr = positive_real_check(fr, 1e-10);

  if (rev.reversible) {
    report.checks.push_back(make_check(
        name("reversible identity Re G(jw) = PSD_Y(w)"), pr.max_re_gap, 1e-8));
    report.checks.push_back(make_check(name("positive real: min Re G(jw)"),
                                       -pr.min_re_g, 1e-10));
    double worst_zero = 0.0;
    for (const auto &z : transmission_zeros(lm))
      worst_zero = std::max(worst_zero, z.real());
    report.checks.push_back(
        make_check(name("zeros in closed left half plane"), worst_zero, 1e-8));
  } else {
    std::ostringstream os;
    os << "not applicable (non-reversible); min Re G = " << pr.min_re_g
       << ", max |Re G - PSD| = " << pr.max_re_gap;
    report.checks.push_back(
        not_applicable(name("reversible identity Re G(jw) = PSD_Y(w)"), os.str()));
    report.checks.push_back(
        not_applicable(name("positive real: min Re G(jw)"), os.str()));
  }

  // PSD non-negativity holds for any stationary chain.
  double worst_psd = 0.0;
  for (const double s : fr.psd)
    worst_psd = std::max(worst_psd, -s);
  report.checks.push_back(
      make_check(name("PSD_Y(w) >= 0"), worst_psd, 1e-10));

  // Conjugate symmetry of G.
  double worst_sym = 0.0;
  for (std::size_t i = 0; i < fr.omegas.size(); ++i) {
    const std::complex<double> g_neg =
        transfer_function(lm, {0.0, -fr.omegas[i]});
    worst_sym = std::max(worst_sym, std::abs(g_neg - std::conj(fr.g[i])));
  }
  report.checks.push_back(
      make_check(name("G(-jw) = conj G(jw)"), worst_sym, 1e-12));
}

std::string render_report(const VerifyReport &report) {
  std::ostringstream os;
  os << "check,residual,tolerance,status,note\n";
  for (const auto &c : report.checks) {
    os << c.name << "," << std::setprecision(17) << c.residual << "," << c.tol
       << ",";
    if (!c.applicable)
      os << "N/A";
    else
      os << (c.passed ? "PASS" : "FAIL");
    os << "," << c.note << "\n";
  }
  os << "overall exit code: " << report.exit_code() << "\n";
  return os.str();
}

} // namespace mfctl
