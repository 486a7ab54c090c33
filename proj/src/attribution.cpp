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
#include "bee/attribution.hpp"

#include "bee/nn.hpp"
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bee {

namespace {

// Channel mean -> resize to the input's spatial dims -> min-max normalize.
Tensor reduce_to_input_map(const Tensor& raw, std::size_t in_h,
                           std::size_t in_w) {
  Tensor map2d =
      raw.rank() == 3 ? channel_stats(raw).mean_map : raw;
  if (map2d.dim(0) != in_h || map2d.dim(1) != in_w)
    map2d = bicubic_resize(map2d, in_h, in_w);
  return minmax_normalize(map2d);
}

Tensor identity_matrix(std::size_t n) {
  Tensor eye({n, n});
  for (std::size_t i = 0; i < n; ++i) eye(i, i) = 1.0;
  return eye;
}

Tensor head_mean(const Tensor& t) {
  const std::size_t heads = t.dim(0), rows = t.dim(1), cols = t.dim(2);
  Tensor mean({rows, cols});
  for (std::size_t h = 0; h < heads; ++h)
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        mean(i, j) += t(h, i, j) / static_cast<double>(heads);
  return mean;
}

}  // namespace

double ExplanationMap::raw_sum() const {
  return std::accumulate(raw.values().begin(), raw.values().end(), 0.0);
}

Tensor interpolate(const Tensor& baseline, const Tensor& x, std::size_t step,
                   std::size_t steps) {
  if (!baseline.same_shape(x))
    throw std::invalid_argument("interpolate: shape mismatch");
  if (step < 1 || step > steps)
    throw std::invalid_argument("interpolate: step must be in [1, steps]");
  const double a = static_cast<double>(step) / static_cast<double>(steps);
  Tensor v = baseline;
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = (1.0 - a) * baseline[i] + a * x[i];
  return v;
}

ExplanationMap path_integration_map(const DifferentiableModel& model,
                                    std::size_t layer, const Tensor& x,
                                    const Tensor& baseline, std::size_t target,
                                    std::size_t steps, Integrand integrand) {
  if (steps < 1)
    throw std::invalid_argument("path_integration_map: steps must be >= 1");
  const auto layer_shape = model.layer_shape(layer);
  if (layer_shape.size() != 3)
    throw std::invalid_argument(
        "path_integration_map: layer has no spatial structure");
  if (baseline.shape() != layer_shape)
    throw std::invalid_argument("path_integration_map: baseline shape mismatch");

  const ForwardTrace trace = model.forward(x);
  const Tensor& x_l = trace.reps[layer];

  Tensor accum(x_l.shape());
  for (std::size_t k = 1; k <= steps; ++k) {
    const Tensor v = interpolate(baseline, x_l, k, steps);
    Tensor g = model.grad_wrt_layer(layer, v, target, &trace);
    if (integrand == Integrand::kGradientTimesInput) g = hadamard(std::move(g), v);
    accum += g;
  }

  ExplanationMap result;
  result.layer = layer;
  result.raw = hadamard(x_l - baseline, accum) * (1.0 / static_cast<double>(steps));
  const auto in_shape = model.input_shape();
  result.map = reduce_to_input_map(result.raw, in_shape[1], in_shape[2]);
  return result;
}

ExplanationMap integrated_gradients(const DifferentiableModel& model,
                                    const Tensor& x, const Tensor& baseline,
                                    std::size_t target, std::size_t steps) {
  return path_integration_map(model, 0, x, baseline, target, steps,
                              Integrand::kGradient);
}

ExplanationMap bee_map_cnn(const DifferentiableModel& model, std::size_t layer,
                           const Tensor& x, const BaselineDraw& draw,
                           std::size_t target, std::size_t steps) {
  ExplanationMap result =
      path_integration_map(model, layer, x, draw.tensor, target, steps,
                           Integrand::kGradientTimesInput);
  result.draw = draw;
  return result;
}

std::vector<double> gradient_rollout(const AttentionTrace& trace) {
  if (trace.attention.empty())
    throw std::invalid_argument("gradient_rollout: need at least one block");
  if (trace.grads.size() != trace.attention.size())
    throw std::invalid_argument("gradient_rollout: attention/gradient mismatch");
  const std::size_t tokens = trace.attention.front().dim(1);
  for (std::size_t b = 0; b < trace.attention.size(); ++b) {
    const Tensor& a = trace.attention[b];
    if (a.rank() != 3 || a.dim(1) != tokens || a.dim(2) != tokens)
      throw std::invalid_argument("gradient_rollout: token count mismatch");
    if (!a.same_shape(trace.grads[b]))
      throw std::invalid_argument("gradient_rollout: gradient shape mismatch");
  }

  Tensor product = identity_matrix(tokens);
  for (std::size_t b = 0; b < trace.attention.size(); ++b) {
    const Tensor factor =
        identity_matrix(tokens) +
        head_mean(hadamard(trace.attention[b], trace.grads[b]));
    product = matmul(product, factor);
  }
  std::vector<double> row(tokens);
  for (std::size_t j = 0; j < tokens; ++j) row[j] = product(0, j);
  return row;
}

ExplanationMap bee_map_vit(const AttentionModel& model, std::size_t layer,
                           const Tensor& x, const BaselineDraw& draw,
                           std::size_t target, std::size_t steps,
                           Integrand integrand) {
  if (steps < 1)
    throw std::invalid_argument("bee_map_vit: steps must be >= 1");
  if (layer < 1 || layer > model.block_count())
    throw std::invalid_argument("bee_map_vit: layer must name a block");
  const std::size_t tokens = model.token_count();
  const std::size_t grid_side =
      static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(tokens - 1))));
  if (grid_side * grid_side != tokens - 1)
    throw std::invalid_argument("bee_map_vit: tokens - 1 must be a perfect square");
  if (draw.tensor.shape() != model.layer_shape(layer))
    throw std::invalid_argument("bee_map_vit: baseline shape mismatch");

  const ForwardTrace trace = model.forward(x);
  const AttentionTrace atrace = model.attention_trace(x, target);
  const Tensor& attn = atrace.attention[layer - 1];
  const Tensor& baseline = draw.tensor;

  Tensor accum(attn.shape());
  for (std::size_t k = 1; k <= steps; ++k) {
    const Tensor v = interpolate(baseline, attn, k, steps);
    Tensor g = model.grad_wrt_layer(layer, v, target, &trace);
    if (integrand == Integrand::kGradientTimesInput) g = hadamard(std::move(g), v);
    accum += g;
  }
  const Tensor m_att =
      hadamard(attn - baseline, accum) * (1.0 / static_cast<double>(steps));

  // Rollout composition with the integrated tensor standing in for the
  // chosen block's factor.
  Tensor product = identity_matrix(tokens);
  for (std::size_t b = 0; b < model.block_count(); ++b) {
    const Tensor inner =
        (b == layer - 1)
            ? m_att
            : hadamard(atrace.attention[b], atrace.grads[b]);
    product = matmul(product, identity_matrix(tokens) + head_mean(inner));
  }

  Tensor grid({grid_side, grid_side});
  for (std::size_t j = 1; j < tokens; ++j)
    grid((j - 1) / grid_side, (j - 1) % grid_side) = product(0, j);

  ExplanationMap result;
  result.layer = layer;
  result.draw = draw;
  result.raw = m_att;
  const auto in_shape = model.input_shape();
  result.map = minmax_normalize(bicubic_resize(grid, in_shape[1], in_shape[2]));
  return result;
}

ExplanationMap average_maps(const std::vector<ExplanationMap>& maps) {
  if (maps.empty())
    throw std::invalid_argument("average_maps: empty list");
  Tensor mean(maps.front().map.shape());
  for (const ExplanationMap& m : maps) {
    if (!m.map.same_shape(mean))
      throw std::invalid_argument("average_maps: dimension mismatch");
    mean += m.map;
  }
  mean *= 1.0 / static_cast<double>(maps.size());

  ExplanationMap result;
  result.layer = maps.front().layer;
  result.draw = maps.front().draw;
  result.map = minmax_normalize(mean);
  return result;
}

std::size_t select_best_index(const std::vector<double>& scores,
                              Direction direction) {
  if (scores.empty())
    throw std::invalid_argument("select_best_index: empty scores");
  std::size_t best = 0;
  double best_value = direction == Direction::kHigherBetter ? scores[0] : -scores[0];
  for (std::size_t i = 1; i < scores.size(); ++i) {
    const double v = direction == Direction::kHigherBetter ? scores[i] : -scores[i];
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

ExplanationMap select_best(const MapPool& pool,
                           const std::vector<double>& scores,
                           Direction direction) {
  if (pool.maps.empty())
    throw std::invalid_argument("select_best: empty pool");
  if (scores.size() != pool.maps.size())
    throw std::invalid_argument("select_best: one score per map required");
  const std::size_t idx = select_best_index(scores, direction);
  ExplanationMap best = pool.maps[idx];
  best.score = scores[idx];
  return best;
}

}  // namespace bee
