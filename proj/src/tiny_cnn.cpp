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
#include "bee/tiny_cnn.hpp"

#include <cmath>
#include <stdexcept>

#include "bee/patterns.hpp"
#include "bee/rng.hpp"

namespace bee {

namespace {

Conv2d seeded_conv(std::size_t out_ch, std::size_t in_ch, double scale,
                   Rng& rng) {
  Conv2d conv;
  conv.weight = Tensor({out_ch, in_ch, 3, 3});
  conv.bias.assign(out_ch, 0.0);
  for (std::size_t i = 0; i < conv.weight.size(); ++i)
    conv.weight[i] = scale * rng.normal();
  for (double& b : conv.bias) b = 0.1 * scale * rng.normal();
  return conv;
}

}  // namespace

TinyCnn::TinyCnn(const Config& config) : config_(config) {
  conv1_.weight = Tensor({config.conv1_out, config.channels, 3, 3});
  conv1_.bias.assign(config.conv1_out, 0.0);
  conv2_.weight = Tensor({config.conv2_out, config.conv1_out, 3, 3});
  conv2_.bias.assign(config.conv2_out, 0.0);
  head_.weight = Tensor({config.classes, config.conv2_out});
  head_.bias.assign(config.classes, 0.0);
}

TinyCnn TinyCnn::zero_initialized() { return TinyCnn(Config()); }

TinyCnn TinyCnn::zero_initialized(const Config& config) {
  return TinyCnn(config);
}

TinyCnn::TinyCnn(std::uint64_t seed) : TinyCnn(seed, Config()) {}

TinyCnn::TinyCnn(std::uint64_t seed, const Config& config) : TinyCnn(config) {
  Rng rng(mix_seed(seed));
  const double s1 = 1.0 / std::sqrt(9.0 * static_cast<double>(config.channels));
  const double s2 = 1.0 / std::sqrt(9.0 * static_cast<double>(config.conv1_out));
  conv1_ = seeded_conv(config.conv1_out, config.channels, s1, rng);
  conv2_ = seeded_conv(config.conv2_out, config.conv1_out, s2, rng);

  // Nearest-class-mean head over the pooled features of the canonical class
  // patterns: row y carries the centered class feature and the bias the
  // -0.5*|feat_y|^2 term, scaled to a moderate logit range.
  const std::size_t k = config.classes;
  std::vector<std::vector<double>> feats(k);
  std::vector<double> mean(config.conv2_out, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    const Tensor proto =
        render_pattern(c, config.channels, config.height, config.width);
    const Tensor h1 = tanh_map(conv_forward(conv1_, proto));
    const Tensor h2 = tanh_map(conv_forward(conv2_, h1));
    feats[c] = pooled_features(h2);
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += feats[c][i] / k;
  }
  double spread = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    double norm2 = 0.0;
    for (std::size_t i = 0; i < mean.size(); ++i) {
      const double centered = feats[c][i] - mean[i];
      norm2 += centered * centered;
    }
    spread += std::sqrt(norm2) / k;
  }
  const double alpha = spread > 1e-12 ? 2.0 / spread : 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    double norm2 = 0.0;
    for (std::size_t i = 0; i < config.conv2_out; ++i) {
      head_.weight(c, i) = alpha * (feats[c][i] - mean[i]);
      norm2 += feats[c][i] * feats[c][i];
    }
    head_.bias[c] = -0.5 * alpha * norm2;
  }
}

std::vector<std::size_t> TinyCnn::input_shape() const {
  return {config_.channels, config_.height, config_.width};
}

std::vector<std::size_t> TinyCnn::layer_shape(std::size_t layer) const {
  switch (layer) {
    case 0:
      return input_shape();
    case 1:
      return {config_.conv1_out, config_.height, config_.width};
    case 2:
      return {config_.conv2_out, config_.height, config_.width};
    default:
      throw std::invalid_argument("TinyCnn: layer index out of range");
  }
}

std::vector<double> TinyCnn::pooled_features(const Tensor& h2) const {
  const std::size_t hw = config_.height * config_.width;
  std::vector<double> pooled(config_.conv2_out, 0.0);
  for (std::size_t c = 0; c < config_.conv2_out; ++c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < config_.height; ++i)
      for (std::size_t j = 0; j < config_.width; ++j) acc += h2(c, i, j);
    pooled[c] = acc / static_cast<double>(hw);
  }
  return pooled;
}

void TinyCnn::check_layer_rep(std::size_t layer, const Tensor& rep) const {
  if (rep.shape() != layer_shape(layer))
    throw std::invalid_argument("TinyCnn: representation shape mismatch");
}

ForwardTrace TinyCnn::forward(const Tensor& x) const {
  check_layer_rep(0, x);
  ForwardTrace trace;
  trace.reps.push_back(x);
  trace.reps.push_back(tanh_map(conv_forward(conv1_, x)));
  trace.reps.push_back(tanh_map(conv_forward(conv2_, trace.reps[1])));
  trace.logits = linear_forward(head_, pooled_features(trace.reps[2]));
  return trace;
}

std::vector<double> TinyCnn::forward_from(std::size_t layer, const Tensor& rep,
                                          const ForwardTrace*) const {
  check_layer_rep(layer, rep);
  if (layer == 0) return forward(rep).logits;
  Tensor h2 = layer == 1 ? tanh_map(conv_forward(conv2_, rep)) : rep;
  return linear_forward(head_, pooled_features(h2));
}

Tensor TinyCnn::grad_wrt_layer(std::size_t layer, const Tensor& rep,
                               std::size_t target, const ForwardTrace*) const {
  check_layer_rep(layer, rep);
  if (target >= config_.classes)
    throw std::invalid_argument("TinyCnn: class index out of range");

  // d logit_y / d h2 = W[y][c] / (H*W), constant in the representation.
  const double inv_hw =
      1.0 / static_cast<double>(config_.height * config_.width);
  auto head_grad = [&](const std::vector<std::size_t>& shape) {
    Tensor dh2(shape);
    for (std::size_t c = 0; c < config_.conv2_out; ++c) {
      const double g = head_.weight(target, c) * inv_hw;
      for (std::size_t i = 0; i < config_.height; ++i)
        for (std::size_t j = 0; j < config_.width; ++j) dh2(c, i, j) = g;
    }
    return dh2;
  };

  if (layer == 2) return head_grad(layer_shape(2));

  // Recompute the sub-forward from `rep`, then walk back through tanh and
  // the convolutions.
  const Tensor h1 = layer == 0 ? tanh_map(conv_forward(conv1_, rep)) : rep;
  const Tensor h2 = tanh_map(conv_forward(conv2_, h1));
  Tensor dh2 = head_grad(layer_shape(2));
  for (std::size_t i = 0; i < dh2.size(); ++i)
    dh2[i] *= 1.0 - h2[i] * h2[i];
  Tensor dh1 = conv_backward_input(conv2_, dh2);
  if (layer == 1) return dh1;
  for (std::size_t i = 0; i < dh1.size(); ++i)
    dh1[i] *= 1.0 - h1[i] * h1[i];
  return conv_backward_input(conv1_, dh1);
}

std::shared_ptr<TinyCnn> build_tiny_cnn(std::uint64_t seed,
                                        const TinyCnn::Config& config) {
  return std::make_shared<TinyCnn>(seed, config);
}

}  // namespace bee
