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
#include "bee/baselines.hpp"

#include <stdexcept>

namespace bee {

const char* to_string(BaselineType type) {
  switch (type) {
    case BaselineType::kNormal: return "Normal";
    case BaselineType::kUniform: return "Uniform";
    case BaselineType::kBlur: return "Blur";
    case BaselineType::kConstant: return "Constant";
    case BaselineType::kTrainData: return "TrainData";
  }
  return "?";
}

std::optional<BaselineType> baseline_type_from_string(std::string_view name) {
  for (BaselineType t : kAllBaselineTypes)
    if (name == to_string(t)) return t;
  return std::nullopt;
}

BaselineDraw sample_baseline(BaselineType kind, const Tensor& x_l, Rng& rng,
                             const std::vector<Tensor>* pool,
                             const BaselineConfig& config) {
  if (x_l.rank() != 3)
    throw std::invalid_argument("sample_baseline: representation must be rank 3");
  if (!x_l.all_finite())
    throw std::invalid_argument("sample_baseline: representation has non-finite values");

  const ChannelStats stats = channel_stats(x_l);
  const std::size_t channels = x_l.dim(0), h = x_l.dim(1), w = x_l.dim(2);

  BaselineDraw draw;
  draw.kind = kind;

  switch (kind) {
    case BaselineType::kNormal: {
      const double sigma =
          rng.uniform(config.normal_sigma_min, config.normal_sigma_max);
      draw.params.sigma = sigma;
      draw.tensor = x_l;
      for (std::size_t c = 0; c < channels; ++c) {
        const double range = stats.channel_max[c] - stats.channel_min[c];
        const double stddev = range > 0.0 ? sigma / range : 0.0;
        for (std::size_t i = 0; i < h; ++i)
          for (std::size_t j = 0; j < w; ++j)
            draw.tensor(c, i, j) += stddev * rng.normal();
      }
      break;
    }
    case BaselineType::kUniform: {
      draw.tensor = Tensor(x_l.shape());
      for (std::size_t c = 0; c < channels; ++c)
        for (std::size_t i = 0; i < h; ++i)
          for (std::size_t j = 0; j < w; ++j)
            draw.tensor(c, i, j) =
                rng.uniform(stats.channel_min[c], stats.channel_max[c]);
      break;
    }
    case BaselineType::kBlur: {
      const double sigma =
          rng.uniform(config.blur_sigma_min, config.blur_sigma_max);
      draw.params.sigma = sigma;
      draw.tensor = gaussian_blur(x_l, sigma);
      break;
    }
    case BaselineType::kConstant: {
      draw.tensor = Tensor(x_l.shape());
      draw.params.channel_values.resize(channels);
      for (std::size_t c = 0; c < channels; ++c) {
        const double value =
            rng.uniform(stats.channel_min[c], stats.channel_max[c]);
        draw.params.channel_values[c] = value;
        for (std::size_t i = 0; i < h; ++i)
          for (std::size_t j = 0; j < w; ++j) draw.tensor(c, i, j) = value;
      }
      break;
    }
    case BaselineType::kTrainData: {
      if (!pool || pool->empty())
        throw std::invalid_argument("sample_baseline: TrainData needs a non-empty pool");
      const std::size_t idx = rng.index(pool->size());
      const Tensor& member = (*pool)[idx];
      if (!member.same_shape(x_l))
        throw std::invalid_argument("sample_baseline: pool member shape mismatch");
      draw.tensor = member;
      draw.params.pool_indices = {idx};
      break;
    }
  }
  return draw;
}

BaselineDraw softmax_normalize_baseline(BaselineDraw draw) {
  if (draw.tensor.rank() != 3)
    throw std::invalid_argument("softmax_normalize_baseline: expected rank 3");
  const std::size_t heads = draw.tensor.dim(0);
  const std::size_t rows = draw.tensor.dim(1), cols = draw.tensor.dim(2);
  for (std::size_t head = 0; head < heads; ++head) {
    Tensor m({rows, cols});
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = draw.tensor(head, i, j);
    m = softmax_rows(m);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) draw.tensor(head, i, j) = m(i, j);
  }
  return draw;
}

}  // namespace bee
