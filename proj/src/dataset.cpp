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
#include "bee/dataset.hpp"

#include <stdexcept>

#include "bee/patterns.hpp"
#include "bee/rng.hpp"

namespace bee {

Dataset synth_dataset(std::uint64_t seed, std::size_t count, Split split,
                      const std::vector<std::size_t>& input_shape,
                      std::size_t classes) {
  if (count < 1)
    throw std::invalid_argument("synth_dataset: count must be >= 1");
  if (input_shape.size() != 3)
    throw std::invalid_argument("synth_dataset: input shape must be rank 3");
  if (classes < 2 || classes > kMaxPatternClasses)
    throw std::invalid_argument("synth_dataset: unsupported class count");

  const std::uint64_t stream = split == Split::kTrain ? 0x7261 : 0x7465;
  Rng rng(derive_seed(seed, stream));

  Dataset dataset;
  dataset.split = split;
  dataset.seed = seed;
  dataset.items.reserve(count);

  const std::size_t channels = input_shape[0];
  const std::size_t h = input_shape[1], w = input_shape[2];
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t label = i % classes;
    const double row_jitter = rng.uniform(-1.0, 1.0);
    const double col_jitter = rng.uniform(-1.0, 1.0);
    const double amplitude = rng.uniform(0.85, 1.15);
    Tensor img = render_pattern(label, channels, h, w, row_jitter, col_jitter,
                                amplitude);
    for (std::size_t v = 0; v < img.size(); ++v) img[v] += 0.04 * rng.normal();
    dataset.items.push_back({std::move(img), label});
  }
  return dataset;
}

}  // namespace bee
