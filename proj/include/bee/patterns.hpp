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
#ifndef BEE_PATTERNS_HPP_
#define BEE_PATTERNS_HPP_

#include <array>
#include <cstddef>

#include "bee/tensor.hpp"

namespace bee {

// Canonical class signatures shared by the reference models and the
// synthetic dataset: class c is a Gaussian blob at a class-specific
// fractional position with a class-specific channel color. The reference
// models calibrate their class heads on the noise-free renders, the dataset
// generator emits jittered noisy ones.
struct ClassPattern {
  double row_frac;
  double col_frac;
  std::array<double, 3> color;
};

static constexpr std::size_t kMaxPatternClasses = 8;

ClassPattern class_pattern(std::size_t cls);

// Noise-free render of the class-c pattern at the given image geometry.
// `row_jitter`/`col_jitter` shift the blob center (in pixels) and
// `amplitude` scales the color; defaults give the canonical prototype.
Tensor render_pattern(std::size_t cls, std::size_t channels, std::size_t height,
                      std::size_t width, double row_jitter = 0.0,
                      double col_jitter = 0.0, double amplitude = 1.0);

}  // namespace bee

#endif  // BEE_PATTERNS_HPP_
