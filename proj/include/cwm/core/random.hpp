// Copyright 2026 The CWM Arena Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CWM_CORE_RANDOM_HPP_
#define CWM_CORE_RANDOM_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

#include "cwm/core/hash.hpp"

namespace cwm {

// Seeded random stream. All stochastic components take one explicitly so that
// every run is reproducible from its seeds.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  // Unbiased draw from [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n);

  // Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  template <class T>
  const T& choice(std::span<const T> items) {
    return items[uniform_index(items.size())];
  }

  // Beta(alpha, beta) draw computed in log space so that shapes far below 1
  // never produce 0/0.
  double beta(double alpha, double beta);

  std::mt19937_64& engine() { return engine_; }

 private:
  double log_gamma_variate(double shape);

  std::mt19937_64 engine_;
};

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  return hash_combine(splitmix64(base), splitmix64(salt));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::string_view salt) {
  return hash_combine(splitmix64(base), fnv1a64(salt));
}

}  // namespace cwm

#endif  // CWM_CORE_RANDOM_HPP_
