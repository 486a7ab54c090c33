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
#ifndef BEE_BASELINES_HPP_
#define BEE_BASELINES_HPP_

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "bee/rng.hpp"
#include "bee/tensor.hpp"

namespace bee {

// The closed set of baseline samplers over intermediate representations.
enum class BaselineType { kNormal, kUniform, kBlur, kConstant, kTrainData };

inline constexpr std::array<BaselineType, 5> kAllBaselineTypes = {
    BaselineType::kNormal, BaselineType::kUniform, BaselineType::kBlur,
    BaselineType::kConstant, BaselineType::kTrainData};

inline constexpr std::size_t kBaselineTypeCount = kAllBaselineTypes.size();

const char* to_string(BaselineType type);
std::optional<BaselineType> baseline_type_from_string(std::string_view name);

// Sampled hyperparameters, enough to reproduce the draw given the seed.
struct BaselineParams {
  double sigma = 0.0;                      // Normal noise scale / Blur kernel sigma
  std::vector<double> channel_values;      // Constant per-channel values
  std::vector<std::size_t> pool_indices;   // TrainData pool members
};

struct BaselineDraw {
  BaselineType kind = BaselineType::kNormal;
  Tensor tensor;
  BaselineParams params;
};

struct BaselineConfig {
  double normal_sigma_min = 0.1;
  double normal_sigma_max = 0.5;
  double blur_sigma_min = 0.0;
  double blur_sigma_max = 50.0;
};

// Draws one baseline of the given type over the representation x_l
// (rank 3: channels x h x w, or an attention tensor heads x tokens x tokens).
// TrainData returns a single pool member per call; averaging over draws is
// the map constructors' job.
BaselineDraw sample_baseline(BaselineType kind, const Tensor& x_l, Rng& rng,
                             const std::vector<Tensor>* pool = nullptr,
                             const BaselineConfig& config = {});

// Row-softmaxes every head matrix of an attention-shaped baseline so each
// row is a probability distribution.
BaselineDraw softmax_normalize_baseline(BaselineDraw draw);

}  // namespace bee

#endif  // BEE_BASELINES_HPP_
