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
#ifndef BEE_METRICS_HPP_
#define BEE_METRICS_HPP_

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "bee/attribution.hpp"
#include "bee/model.hpp"
#include "bee/tensor.hpp"

namespace bee {

// The eight faithfulness metrics. POS, DEL and ADP are lower-better; the
// rest are higher-better. PIC is the only binary per-instance metric.
enum class MetricId { kPos, kNeg, kIns, kDel, kAdp, kPic, kSic, kAic };

inline constexpr std::array<MetricId, 8> kAllMetrics = {
    MetricId::kPos, MetricId::kNeg, MetricId::kIns, MetricId::kDel,
    MetricId::kAdp, MetricId::kPic, MetricId::kSic, MetricId::kAic};

Direction metric_direction(MetricId id);
bool metric_is_binary(MetricId id);
const char* to_string(MetricId id);
std::optional<MetricId> metric_from_string(std::string_view name);

enum class MaskOrder { kDescending, kAscending };
enum class ClassRef { kTarget, kPredicted };

struct MetricScore {
  double value = 0.0;
  std::optional<Curve> curve;
  std::vector<double> per_instance;
  std::size_t skipped = 0;
};

struct MetricConfig {
  ClassRef class_ref = ClassRef::kTarget;
  double mask_fill = 0.0;
  double info_blur_sigma = 4.0;  // base blur of the information curves
};

// Pixel indices (row-major over the spatial grid) ordered by map value in
// the given order; ties broken by position.
std::vector<std::size_t> pixel_ranking(const Tensor& map, MaskOrder order);

// Replaces the floor(fraction * pixels) pixels ranked first with the fill,
// across all channels.
Tensor apply_mask(const Tensor& x, const Tensor& map, double fraction,
                  MaskOrder order, double fill);
Tensor apply_mask(const Tensor& x, const Tensor& map, double fraction,
                  MaskOrder order, const Tensor& fill);

// Starts from `base` and restores the top floor(fraction * pixels)
// highest-ranked pixels to their values in x.
Tensor reveal_top(const Tensor& x, const Tensor& map, double fraction,
                  const Tensor& base);

// 100 * mean of max(0, Y - O) / Y, where Y is the reference-class softmax
// confidence on x and O the confidence on x masked by the map.
MetricScore average_drop(const DifferentiableModel& model,
                         const std::vector<Tensor>& inputs,
                         const std::vector<ExplanationMap>& maps,
                         const std::vector<std::size_t>& classes,
                         const MetricConfig& config = {});

// 100 * mean of 1(Y < O); per-instance indicators exposed.
MetricScore pct_increase(const DifferentiableModel& model,
                         const std::vector<Tensor>& inputs,
                         const std::vector<ExplanationMap>& maps,
                         const std::vector<std::size_t>& classes,
                         const MetricConfig& config = {});

// AUC of the reference-class probability while masking 10%..90% of the
// pixels, highest-first (POS) or lowest-first (NEG).
MetricScore perturbation_auc(const DifferentiableModel& model, const Tensor& x,
                             const Tensor& map, std::size_t target,
                             MetricId polarity, const MetricConfig& config = {});

// AUC of the reference-class probability while deleting (DEL) or inserting
// (INS) pixels at fractions 0, 0.1, ..., 1.
MetricScore insertion_deletion_auc(const DifferentiableModel& model,
                                   const Tensor& x, const Tensor& map,
                                   std::size_t target, MetricId mode,
                                   const MetricConfig& config = {});

// AUC of the correctness indicator (AIC) or the normalized reference-class
// probability (SIC) while sharpening top-ranked pixels of a blurred image.
MetricScore information_curves(const DifferentiableModel& model,
                               const Tensor& x, const Tensor& map,
                               std::size_t target, MetricId mode,
                               double blur_sigma,
                               const MetricConfig& config = {});

// Uniform per-instance entry point used for map selection and bandit
// rewards. ADP yields the per-instance drop, PIC the 0/100 increase
// indicator, the AUC metrics their AUC value.
double evaluate_metric_instance(MetricId id, const DifferentiableModel& model,
                                const Tensor& x, std::size_t target,
                                const Tensor& map,
                                const MetricConfig& config = {});

}  // namespace bee

#endif  // BEE_METRICS_HPP_
