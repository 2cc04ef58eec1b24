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

#ifndef MFCTL_VERIFY_HPP
#define MFCTL_VERIFY_HPP

#include <string>
#include <vector>

#include "mfctl/config.hpp"

namespace mfctl {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool passed = true;
  bool applicable = true;
  bool cross_check = false; // failure indicates an internal bug, not a
                            // violated identity
  std::string note;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool identity_failure() const;
  bool cross_check_failure() const;
  /// 0 all pass, 2 identity violated, 3 cross-check failed.
  int exit_code() const;
};

struct VerifyOptions {
  double zeta_min = -2.0;
  double zeta_max = 2.0;
  int zeta_points = 41;
  int omega_points = 400;
  double fd_step = 1e-5;
};

/// Runs every cross-check from the numeric modules on one instance and
/// appends the residual rows to `report`. Checks whose hypothesis does not
/// hold (e.g. the Re G = PSD identity on a non-reversible chain) are marked not
/// applicable rather than failed.
void verify_instance(const ModelInstance &model, const VerifyOptions &options,
                     const std::string &tag, VerifyReport &report);

std::string render_report(const VerifyReport &report);

} // namespace mfctl

#endif
