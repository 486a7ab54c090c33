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
#include "bee/patterns.hpp"

#include <cmath>
#include <stdexcept>

namespace bee {

namespace {

constexpr std::array<std::array<double, 2>, kMaxPatternClasses> kCenters = {{
    {0.30, 0.30},
    {0.30, 0.70},
    {0.70, 0.30},
    {0.70, 0.70},
    {0.50, 0.50},
    {0.30, 0.50},
    {0.70, 0.50},
    {0.50, 0.30},
}};

constexpr std::array<std::array<double, 3>, kMaxPatternClasses> kColors = {{
    {0.95, 0.15, 0.15},
    {0.15, 0.95, 0.15},
    {0.15, 0.15, 0.95},
    {0.85, 0.85, 0.10},
    {0.10, 0.85, 0.85},
    {0.85, 0.10, 0.85},
    {0.60, 0.60, 0.60},
    {0.95, 0.55, 0.10},
}};

}  // namespace

ClassPattern class_pattern(std::size_t cls) {
  if (cls >= kMaxPatternClasses)
    throw std::invalid_argument("class_pattern: class index out of range");
  return {kCenters[cls][0], kCenters[cls][1], kColors[cls]};
}

Tensor render_pattern(std::size_t cls, std::size_t channels, std::size_t height,
                      std::size_t width, double row_jitter, double col_jitter,
                      double amplitude) {
  const ClassPattern pat = class_pattern(cls);
  const double cy = pat.row_frac * static_cast<double>(height - 1) + row_jitter;
  const double cx = pat.col_frac * static_cast<double>(width - 1) + col_jitter;
  const double blob_sigma =
      0.14 * static_cast<double>(std::min(height, width));
  const double background = 0.05;

  Tensor img({channels, height, width}, background);
  for (std::size_t c = 0; c < channels; ++c) {
    const double color = pat.color[c % pat.color.size()];
    for (std::size_t i = 0; i < height; ++i) {
      for (std::size_t j = 0; j < width; ++j) {
        const double dy = static_cast<double>(i) - cy;
        const double dx = static_cast<double>(j) - cx;
        img(c, i, j) += amplitude * color *
                        std::exp(-0.5 * (dy * dy + dx * dx) /
                                 (blob_sigma * blob_sigma));
      }
    }
  }
  return img;
}

}  // namespace bee
