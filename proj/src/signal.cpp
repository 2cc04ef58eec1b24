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

#include "mfctl/signal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mfctl {

ControlSignal ControlSignal::constant(double value) {
  ControlSignal s;
  s.kind_ = Kind::constant;
  s.offset_ = value;
  return s;
}

ControlSignal ControlSignal::sinusoid(double amplitude, double omega,
                                      double offset) {
  ControlSignal s;
  s.kind_ = Kind::sinusoid;
  s.amplitude_ = amplitude;
  s.omega_ = omega;
  s.offset_ = offset;
  return s;
}

ControlSignal ControlSignal::piecewise_constant(std::vector<double> times,
                                                std::vector<double> values) {
  if (times.size() != values.size() || times.empty())
    throw input_error("piecewise signal needs matching non-empty breakpoints");
  if (!std::is_sorted(times.begin(), times.end()))
    throw input_error("piecewise signal breakpoints must be increasing");
  ControlSignal s;
  s.kind_ = Kind::zero_order_hold;
  s.times_ = std::move(times);
  s.values_ = std::move(values);
  return s;
}

ControlSignal ControlSignal::sampled(std::vector<double> times,
                                     std::vector<double> values) {
  return piecewise_constant(std::move(times), std::move(values));
}

double ControlSignal::operator()(double t) const {
  switch (kind_) {
  case Kind::constant:
    return offset_;
  case Kind::sinusoid:
    return offset_ + amplitude_ * std::sin(omega_ * t);
  case Kind::zero_order_hold: {
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin())
      return 0.0;
    return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
  }
  }
  return 0.0;
}

std::pair<double, double> ControlSignal::range(double t_end) const {
  switch (kind_) {
  case Kind::constant:
    return {offset_, offset_};
  case Kind::sinusoid: {
    // Conservative envelope; exact enough for the dominating-rate bound.
    const double lo = offset_ - std::abs(amplitude_);
    const double hi = offset_ + std::abs(amplitude_);
    return {lo, hi};
  }
  case Kind::zero_order_hold: {
    double lo = 0.0, hi = 0.0;
    if (times_.front() > 0) {
      lo = hi = 0.0;
    } else {
      lo = hi = values_.front();
    }
    for (std::size_t i = 0; i < times_.size(); ++i) {
      if (times_[i] > t_end)
        break;
      lo = std::min(lo, values_[i]);
      hi = std::max(hi, values_[i]);
    }
    return {lo, hi};
  }
  }
  return {0.0, 0.0};
}

ControlSignal ControlSignal::parse(const std::string &spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string args =
      colon == std::string::npos ? std::string() : spec.substr(colon + 1);

  auto split = [](const std::string &text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep))
      parts.push_back(item);
    return parts;
  };
  auto to_double = [&spec](const std::string &text) {
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size())
        throw std::invalid_argument(text);
      return v;
    } catch (const std::exception &) {
      throw input_error("bad number '" + text + "' in signal spec '" + spec +
                        "'");
    }
  };

  if (kind == "const") {
    return constant(args.empty() ? 0.0 : to_double(args));
  }
  if (kind == "sin") {
    const auto parts = split(args, ',');
    if (parts.size() < 2 || parts.size() > 3)
      throw input_error("sin signal needs 'sin:amplitude,omega[,offset]'");
    return sinusoid(to_double(parts[0]), to_double(parts[1]),
                    parts.size() == 3 ? to_double(parts[2]) : 0.0);
  }
  if (kind == "pwc") {
    std::vector<double> times, values;
    for (const auto &piece : split(args, ',')) {
      const auto eq = piece.find('=');
      if (eq == std::string::npos)
        throw input_error("pwc signal needs 'pwc:t0=v0,t1=v1,...'");
      times.push_back(to_double(piece.substr(0, eq)));
      values.push_back(to_double(piece.substr(eq + 1)));
    }
    return piecewise_constant(std::move(times), std::move(values));
  }
  throw input_error("unknown signal kind '" + kind +
                    "' (expected const, sin or pwc)");
}

std::string ControlSignal::describe() const {
  std::ostringstream os;
  switch (kind_) {
  case Kind::constant:
    os << "const:" << offset_;
    break;
  case Kind::sinusoid:
    os << "sin:" << amplitude_ << "," << omega_;
    if (offset_ != 0.0)
      os << "," << offset_;
    break;
  case Kind::zero_order_hold:
    os << "pwc:" << times_.size() << " breakpoints";
    break;
  }
  return os.str();
}

} // namespace mfctl
