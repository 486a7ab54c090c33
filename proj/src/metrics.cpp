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
#include "bee/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bee {

namespace {

// floor(fraction * pixels) with a guard against representation error at the
// tenth-step grid points (0.3 * 10 must count as 3).
std::size_t masked_count(double fraction, std::size_t pixels) {
  return static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(pixels) + 1e-9));
}

void check_mask_args(const Tensor& x, const Tensor& map, double fraction) {
  if (x.rank() != 2 && x.rank() != 3)
    throw std::invalid_argument("apply_mask: input must be rank 2 or 3");
  if (map.rank() != 2)
    throw std::invalid_argument("apply_mask: map must be rank 2");
  const std::size_t h = x.rank() == 3 ? x.dim(1) : x.dim(0);
  const std::size_t w = x.rank() == 3 ? x.dim(2) : x.dim(1);
  if (map.dim(0) != h || map.dim(1) != w)
    throw std::invalid_argument("apply_mask: map/input spatial mismatch");
  if (fraction < 0.0 || fraction > 1.0)
    throw std::invalid_argument("apply_mask: fraction must be in [0, 1]");
}

// Writes fill(i, j) into the first `count` ranked pixels of all channels.
template <typename FillAt>
Tensor masked_copy(const Tensor& x, const std::vector<std::size_t>& ranking,
                   std::size_t count, FillAt fill_at) {
  Tensor out = x;
  const std::size_t channels = x.rank() == 3 ? x.dim(0) : 1;
  const std::size_t w = x.rank() == 3 ? x.dim(2) : x.dim(1);
  const std::size_t plane = x.rank() == 3 ? x.dim(1) * x.dim(2) : 0;
  for (std::size_t r = 0; r < count; ++r) {
    const std::size_t pix = ranking[r];
    const std::size_t i = pix / w, j = pix % w;
    for (std::size_t c = 0; c < channels; ++c)
      out[c * plane + pix] = fill_at(c, i, j);
  }
  return out;
}

std::size_t reference_class(const DifferentiableModel& model, const Tensor& x,
                            std::size_t target, ClassRef ref) {
  if (ref == ClassRef::kTarget) return target;
  return argmax(model.forward(x).logits);
}

double class_probability(const DifferentiableModel& model, const Tensor& x,
                         std::size_t cls) {
  return softmax(model.forward(x).logits)[cls];
}

Tensor hadamard_broadcast(const Tensor& x, const Tensor& map) {
  Tensor out = x;
  const std::size_t channels = x.rank() == 3 ? x.dim(0) : 1;
  const std::size_t plane = map.size();
  for (std::size_t c = 0; c < channels; ++c)
    for (std::size_t p = 0; p < plane; ++p) out[c * plane + p] *= map[p];
  return out;
}

}  // namespace

Direction metric_direction(MetricId id) {
  switch (id) {
    case MetricId::kPos:
    case MetricId::kDel:
    case MetricId::kAdp:
      return Direction::kLowerBetter;
    default:
      return Direction::kHigherBetter;
  }
}

bool metric_is_binary(MetricId id) { return id == MetricId::kPic; }

const char* to_string(MetricId id) {
  switch (id) {
    case MetricId::kPos: return "POS";
    case MetricId::kNeg: return "NEG";
    case MetricId::kIns: return "INS";
    case MetricId::kDel: return "DEL";
    case MetricId::kAdp: return "ADP";
    case MetricId::kPic: return "PIC";
    case MetricId::kSic: return "SIC";
    case MetricId::kAic: return "AIC";
  }
  return "?";
}

std::optional<MetricId> metric_from_string(std::string_view name) {
  for (MetricId id : kAllMetrics)
    if (name == to_string(id)) return id;
  return std::nullopt;
}

std::vector<std::size_t> pixel_ranking(const Tensor& map, MaskOrder order) {
  std::vector<std::size_t> idx(map.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return order == MaskOrder::kDescending ? map[a] > map[b] : map[a] < map[b];
  });
  return idx;
}

Tensor apply_mask(const Tensor& x, const Tensor& map, double fraction,
                  MaskOrder order, double fill) {
  check_mask_args(x, map, fraction);
  const auto ranking = pixel_ranking(map, order);
  return masked_copy(x, ranking, masked_count(fraction, map.size()),
                     [fill](std::size_t, std::size_t, std::size_t) { return fill; });
}

Tensor apply_mask(const Tensor& x, const Tensor& map, double fraction,
                  MaskOrder order, const Tensor& fill) {
  check_mask_args(x, map, fraction);
  if (!fill.same_shape(x))
    throw std::invalid_argument("apply_mask: fill tensor shape mismatch");
  const auto ranking = pixel_ranking(map, order);
  const std::size_t plane = map.size();
  return masked_copy(
      x, ranking, masked_count(fraction, plane),
      [&](std::size_t c, std::size_t i, std::size_t j) {
        return x.rank() == 3 ? fill(c, i, j) : fill(i, j);
      });
}

Tensor reveal_top(const Tensor& x, const Tensor& map, double fraction,
                  const Tensor& base) {
  check_mask_args(x, map, fraction);
  if (!base.same_shape(x))
    throw std::invalid_argument("reveal_top: base shape mismatch");
  const auto ranking = pixel_ranking(map, MaskOrder::kDescending);
  const std::size_t count = masked_count(fraction, map.size());
  Tensor out = base;
  const std::size_t channels = x.rank() == 3 ? x.dim(0) : 1;
  const std::size_t plane = map.size();
  for (std::size_t r = 0; r < count; ++r) {
    const std::size_t pix = ranking[r];
    for (std::size_t c = 0; c < channels; ++c)
      out[c * plane + pix] = x[c * plane + pix];
  }
  return out;
}

MetricScore average_drop(const DifferentiableModel& model,
                         const std::vector<Tensor>& inputs,
                         const std::vector<ExplanationMap>& maps,
                         const std::vector<std::size_t>& classes,
                         const MetricConfig& config) {
  if (inputs.size() != maps.size() || inputs.size() != classes.size())
    throw std::invalid_argument("average_drop: misaligned lists");
  MetricScore score;
  double acc = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const std::size_t ref =
        reference_class(model, inputs[i], classes[i], config.class_ref);
    const double y = class_probability(model, inputs[i], ref);
    if (y <= 0.0) {
      ++score.skipped;
      continue;
    }
    const double o = class_probability(
        model, hadamard_broadcast(inputs[i], maps[i].map), ref);
    const double drop = 100.0 * std::max(0.0, y - o) / y;
    score.per_instance.push_back(drop);
    acc += drop;
    ++used;
  }
  score.value = used > 0 ? acc / static_cast<double>(used) : 0.0;
  return score;
}

MetricScore pct_increase(const DifferentiableModel& model,
                         const std::vector<Tensor>& inputs,
                         const std::vector<ExplanationMap>& maps,
                         const std::vector<std::size_t>& classes,
                         const MetricConfig& config) {
  if (inputs.size() != maps.size() || inputs.size() != classes.size())
    throw std::invalid_argument("pct_increase: misaligned lists");
  MetricScore score;
  double acc = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const std::size_t ref =
        reference_class(model, inputs[i], classes[i], config.class_ref);
    const double y = class_probability(model, inputs[i], ref);
    const double o = class_probability(
        model, hadamard_broadcast(inputs[i], maps[i].map), ref);
    const double inc = y < o ? 1.0 : 0.0;
    score.per_instance.push_back(inc);
    acc += inc;
  }
  score.value =
      inputs.empty() ? 0.0 : 100.0 * acc / static_cast<double>(inputs.size());
  return score;
}

MetricScore perturbation_auc(const DifferentiableModel& model, const Tensor& x,
                             const Tensor& map, std::size_t target,
                             MetricId polarity, const MetricConfig& config) {
  if (polarity != MetricId::kPos && polarity != MetricId::kNeg)
    throw std::invalid_argument("perturbation_auc: polarity must be POS or NEG");
  const std::size_t ref = reference_class(model, x, target, config.class_ref);
  const MaskOrder order = polarity == MetricId::kPos ? MaskOrder::kDescending
                                                     : MaskOrder::kAscending;
  MetricScore score;
  Curve curve;
  for (int step = 1; step <= 9; ++step) {
    const double fraction = 0.1 * step;
    const Tensor masked = apply_mask(x, map, fraction, order, config.mask_fill);
    curve.xs.push_back(fraction);
    curve.ys.push_back(class_probability(model, masked, ref));
  }
  score.value = trapezoid_auc(curve);
  score.curve = std::move(curve);
  return score;
}

MetricScore insertion_deletion_auc(const DifferentiableModel& model,
                                   const Tensor& x, const Tensor& map,
                                   std::size_t target, MetricId mode,
                                   const MetricConfig& config) {
  if (mode != MetricId::kIns && mode != MetricId::kDel)
    throw std::invalid_argument("insertion_deletion_auc: mode must be INS or DEL");
  const std::size_t ref = reference_class(model, x, target, config.class_ref);
  const Tensor blank(x.shape(), config.mask_fill);
  MetricScore score;
  Curve curve;
  for (int step = 0; step <= 10; ++step) {
    const double fraction = 0.1 * step;
    const Tensor probe =
        mode == MetricId::kDel
            ? apply_mask(x, map, fraction, MaskOrder::kDescending,
                         config.mask_fill)
            : reveal_top(x, map, fraction, blank);
    curve.xs.push_back(fraction);
    curve.ys.push_back(class_probability(model, probe, ref));
  }
  score.value = trapezoid_auc(curve);
  score.curve = std::move(curve);
  return score;
}

MetricScore information_curves(const DifferentiableModel& model,
                               const Tensor& x, const Tensor& map,
                               std::size_t target, MetricId mode,
                               double blur_sigma, const MetricConfig& config) {
  if (mode != MetricId::kSic && mode != MetricId::kAic)
    throw std::invalid_argument("information_curves: mode must be SIC or AIC");
  if (blur_sigma <= 0.0)
    throw std::invalid_argument("information_curves: blur_sigma must be positive");
  const std::size_t ref = reference_class(model, x, target, config.class_ref);
  const Tensor base = gaussian_blur(x, blur_sigma);
  const double p_full = class_probability(model, x, ref);

  MetricScore score;
  Curve curve;
  for (int step = 0; step <= 10; ++step) {
    const double fraction = 0.1 * step;
    const Tensor probe = reveal_top(x, map, fraction, base);
    double y;
    if (mode == MetricId::kAic) {
      y = argmax(model.forward(probe).logits) == ref ? 1.0 : 0.0;
    } else {
      const double p = class_probability(model, probe, ref);
      y = p_full > 0.0 ? std::clamp(p / p_full, 0.0, 1.0) : 0.0;
    }
    curve.xs.push_back(fraction);
    curve.ys.push_back(y);
  }
  score.value = trapezoid_auc(curve);
  score.curve = std::move(curve);
  return score;
}

double evaluate_metric_instance(MetricId id, const DifferentiableModel& model,
                                const Tensor& x, std::size_t target,
                                const Tensor& map, const MetricConfig& config) {
  switch (id) {
    case MetricId::kPos:
    case MetricId::kNeg:
      return perturbation_auc(model, x, map, target, id, config).value;
    case MetricId::kIns:
    case MetricId::kDel:
      return insertion_deletion_auc(model, x, map, target, id, config).value;
    case MetricId::kSic:
    case MetricId::kAic:
      return information_curves(model, x, map, target, id,
                                config.info_blur_sigma, config)
          .value;
    case MetricId::kAdp: {
      ExplanationMap wrapper;
      wrapper.map = map;
      return average_drop(model, {x}, {wrapper}, {target}, config).value;
    }
    case MetricId::kPic: {
      ExplanationMap wrapper;
      wrapper.map = map;
      return pct_increase(model, {x}, {wrapper}, {target}, config).value;
    }
  }
  throw std::invalid_argument("evaluate_metric_instance: unknown metric");
}

}  // namespace bee
