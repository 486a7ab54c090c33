/*
 * Copyright 2026 The BEE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef BEE_RNG_HPP_
#define BEE_RNG_HPP_

#include <cstdint>
#include <random>

namespace bee {

// Deterministic seeded random stream. The engine is std::mt19937_64 (whose
// output sequence is fixed by the standard) and all variate transforms are
// implemented here, so identical seeds give identical draws on every
// platform. Required for snapshot replay.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller. Two uniforms per draw, no caching, so
  // the draw count is predictable for replay.
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);

  // Gamma(shape, 1) via Marsaglia-Tsang; shape > 0.
  double gamma(double shape);

  double beta(double alpha, double beta_param);

  // Derived independent stream.
  Rng fork();

 private:
  std::mt19937_64 engine_;
};

// Stateless seed mixer (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t seed);

// Derives the seed of a named sub-stream from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace bee

#endif  // BEE_RNG_HPP_
