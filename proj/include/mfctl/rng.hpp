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

#ifndef MFCTL_RNG_HPP
#define MFCTL_RNG_HPP

#include <cmath>
#include <cstdint>

namespace mfctl {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based stream: each (seed, stream) pair yields an independent
// deterministic sequence, so results do not depend on scheduling.
class Rng {
public:
  Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {
    if (state_ == 0)
      state_ = 0x9e3779b97f4a7c15ULL;
  }

  std::uint64_t next_u64() {
    state_ = splitmix64(state_);
    return state_;
  }

  /// Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double exponential(double rate) {
    return -std::log1p(-uniform()) / rate;
  }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

private:
  std::uint64_t state_;
};

} // namespace mfctl

#endif
