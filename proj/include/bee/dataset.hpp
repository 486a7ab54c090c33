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
#ifndef BEE_DATASET_HPP_
#define BEE_DATASET_HPP_

#include <cstdint>
#include <vector>

#include "bee/tensor.hpp"

namespace bee {

enum class Split { kTrain, kTest };

struct DatasetItem {
  Tensor input;
  std::size_t label = 0;
};

struct Dataset {
  std::vector<DatasetItem> items;
  Split split = Split::kTrain;
  std::uint64_t seed = 0;
};

// Seeded class-conditioned images: per-class Gaussian blobs at
// class-specific positions with class-specific colors, jittered and
// noise-corrupted. Train and test splits draw from disjoint seed streams.
Dataset synth_dataset(std::uint64_t seed, std::size_t count, Split split,
                      const std::vector<std::size_t>& input_shape,
                      std::size_t classes);

}  // namespace bee

#endif  // BEE_DATASET_HPP_
