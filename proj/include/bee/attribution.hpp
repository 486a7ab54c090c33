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
#ifndef BEE_ATTRIBUTION_HPP_
#define BEE_ATTRIBUTION_HPP_

#include <optional>
#include <vector>

#include "bee/baselines.hpp"
#include "bee/model.hpp"
#include "bee/tensor.hpp"

namespace bee {

enum class Direction { kHigherBetter, kLowerBetter };

// A 2D attribution map over the input's spatial dimensions, min-max
// normalized to [0, 1]. `raw` keeps the attribution tensor before the
// spatial reduction and normalization (the carrier of the completeness sum).
struct ExplanationMap {
  Tensor map;
  std::size_t layer = 0;
  std::optional<BaselineDraw> draw;
  std::optional<double> score;
  Tensor raw;

  double raw_sum() const;
};

struct MapPool {
  std::vector<ExplanationMap> maps;
};

// (1 - k/n) * baseline + (k/n) * x, with 1 <= k <= n.
Tensor interpolate(const Tensor& baseline, const Tensor& x, std::size_t step,
                   std::size_t steps);

// The accumulated per-step quantity: the gradient alone, or the gradient
// elementwise-multiplied by the interpolated representation.
enum class Integrand { kGradient, kGradientTimesInput };

// Path-integration attribution at a spatial (rank-3) layer: accumulate the
// integrand along the straight path from `baseline` to the layer-`layer`
// representation of x, difference-weight the sum, reduce over channels,
// resize to the input's spatial dimensions and min-max normalize.
ExplanationMap path_integration_map(const DifferentiableModel& model,
                                    std::size_t layer, const Tensor& x,
                                    const Tensor& baseline, std::size_t target,
                                    std::size_t steps, Integrand integrand);

// Classic integrated gradients on the input representation.
ExplanationMap integrated_gradients(const DifferentiableModel& model,
                                    const Tensor& x, const Tensor& baseline,
                                    std::size_t target, std::size_t steps);

// Path-integration map on a convolutional layer with the gradient-times-
// input integrand; the draw is recorded on the result.
ExplanationMap bee_map_cnn(const DifferentiableModel& model, std::size_t layer,
                           const Tensor& x, const BaselineDraw& draw,
                           std::size_t target, std::size_t steps);

// Identity-augmented, gradient-weighted attention composition across blocks;
// returns row 0 (the class token) of the block product.
std::vector<double> gradient_rollout(const AttentionTrace& trace);

// Path-integration map on a transformer block's attention tensor. The
// accumulated attention-level attribution replaces the block's rollout
// factor; the composed class-token row (first element dropped) is reshaped
// to the patch grid, resized and normalized.
ExplanationMap bee_map_vit(const AttentionModel& model, std::size_t layer,
                           const Tensor& x, const BaselineDraw& draw,
                           std::size_t target, std::size_t steps,
                           Integrand integrand = Integrand::kGradientTimesInput);

// Elementwise mean of the given maps, then min-max normalize.
ExplanationMap average_maps(const std::vector<ExplanationMap>& maps);

// Index of the best score: argmax for higher-better, argmin for
// lower-better; ties by lowest index.
std::size_t select_best_index(const std::vector<double>& scores,
                              Direction direction);

// The pool member whose direction-adjusted score is maximal; its score field
// is set on the returned copy.
ExplanationMap select_best(const MapPool& pool,
                           const std::vector<double>& scores,
                           Direction direction);

}  // namespace bee

#endif  // BEE_ATTRIBUTION_HPP_
