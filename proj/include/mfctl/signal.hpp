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

#ifndef MFCTL_SIGNAL_HPP
#define MFCTL_SIGNAL_HPP

#include <string>
#include <utility>
#include <vector>

#include "mfctl/error.hpp"

namespace mfctl {

/// The broadcast control signal zeta_t. Piecewise-constant and sampled
/// signals are evaluated with zero-order hold.
class ControlSignal {
public:
  static ControlSignal constant(double value);
  static ControlSignal sinusoid(double amplitude, double omega,
                                double offset = 0.0);
  /// Breakpoint times must be increasing; value i holds on [t_i, t_{i+1}).
  /// Before the first breakpoint the signal is 0.
  static ControlSignal piecewise_constant(std::vector<double> times,
                                          std::vector<double> values);
  static ControlSignal sampled(std::vector<double> times,
                               std::vector<double> values);

  /// Parses "const:c", "sin:amp,omega[,offset]" or
  /// "pwc:t0=v0,t1=v1,...".
  static ControlSignal parse(const std::string &spec);

  double operator()(double t) const;

  /// [min, max] of the signal over [0, t_end].
  std::pair<double, double> range(double t_end) const;

  std::string describe() const;

private:
  enum class Kind { constant, sinusoid, zero_order_hold };
  Kind kind_ = Kind::constant;
  double amplitude_ = 0.0;
  double omega_ = 0.0;
  double offset_ = 0.0;
  std::vector<double> times_;
  std::vector<double> values_;
};

} // namespace mfctl

#endif
