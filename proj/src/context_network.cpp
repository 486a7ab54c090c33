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
#include "bee/context_network.hpp"

#include <cmath>
#include <stdexcept>

#include "bee/rng.hpp"

namespace bee {

namespace {
constexpr std::size_t kConv1Out = 3;
constexpr std::size_t kConv2Out = 4;
}  // namespace

struct ContextNetwork::Trace {
  Tensor h1;  // post-tanh conv1
  Tensor h2;  // post-tanh conv2
  std::vector<double> pooled;
  std::vector<double> context;
};

ContextNetwork::ContextNetwork(std::vector<std::size_t> input_shape,
                               std::size_t context_dim, std::uint64_t seed)
    : input_shape_(std::move(input_shape)), context_dim_(context_dim) {
  if (input_shape_.size() != 3)
    throw std::invalid_argument("ContextNetwork: input must be rank 3");
  if (context_dim_ == 0)
    throw std::invalid_argument("ContextNetwork: context_dim must be positive");

  Rng rng(mix_seed(seed ^ 0xc0de4e7ULL));
  const std::size_t in_ch = input_shape_[0];
  conv1_.weight = Tensor({kConv1Out, in_ch, 3, 3});
  conv1_.bias.assign(kConv1Out, 0.0);
  conv2_.weight = Tensor({kConv2Out, kConv1Out, 3, 3});
  conv2_.bias.assign(kConv2Out, 0.0);
  head_.weight = Tensor({context_dim_, kConv2Out});
  head_.bias.assign(context_dim_, 0.0);

  const double s1 = 1.0 / std::sqrt(9.0 * static_cast<double>(in_ch));
  const double s2 = 1.0 / std::sqrt(9.0 * kConv1Out);
  for (std::size_t i = 0; i < conv1_.weight.size(); ++i)
    conv1_.weight[i] = s1 * rng.normal();
  for (std::size_t i = 0; i < conv2_.weight.size(); ++i)
    conv2_.weight[i] = s2 * rng.normal();
  for (std::size_t i = 0; i < head_.weight.size(); ++i)
    head_.weight[i] = 2.0 * rng.normal();
}

ContextNetwork::Trace ContextNetwork::run(const Tensor& x) const {
  if (x.shape() != input_shape_)
    throw std::invalid_argument("ContextNetwork: input shape mismatch");
  Trace t;
  t.h1 = tanh_map(conv_forward(conv1_, x));
  t.h2 = tanh_map(conv_forward(conv2_, t.h1));
  const std::size_t h = input_shape_[1], w = input_shape_[2];
  t.pooled.assign(kConv2Out, 0.0);
  for (std::size_t c = 0; c < kConv2Out; ++c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < w; ++j) acc += t.h2(c, i, j);
    t.pooled[c] = acc / static_cast<double>(h * w);
  }
  t.context = linear_forward(head_, t.pooled);
  return t;
}

std::vector<double> ContextNetwork::embed(const Tensor& x) const {
  return run(x).context;
}

std::vector<double> ContextNetwork::param_grad(
    const Tensor& x, const std::vector<double>& dloss_dcontext) const {
  if (dloss_dcontext.size() != context_dim_)
    throw std::invalid_argument("ContextNetwork: context gradient size mismatch");
  const Trace t = run(x);
  const std::size_t h = input_shape_[1], w = input_shape_[2];
  const double inv_hw = 1.0 / static_cast<double>(h * w);

  // Head parameters.
  Tensor dhead_w({context_dim_, kConv2Out});
  std::vector<double> dhead_b(dloss_dcontext);
  std::vector<double> dpooled(kConv2Out, 0.0);
  for (std::size_t k = 0; k < context_dim_; ++k)
    for (std::size_t c = 0; c < kConv2Out; ++c) {
      dhead_w(k, c) = dloss_dcontext[k] * t.pooled[c];
      dpooled[c] += dloss_dcontext[k] * head_.weight(k, c);
    }

  // Back through the pool and both convolutions.
  Tensor dh2({kConv2Out, h, w});
  for (std::size_t c = 0; c < kConv2Out; ++c) {
    const double g = dpooled[c] * inv_hw;
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < w; ++j) dh2(c, i, j) = g;
  }
  for (std::size_t i = 0; i < dh2.size(); ++i)
    dh2[i] *= 1.0 - t.h2[i] * t.h2[i];

  Tensor dconv2_w({kConv2Out, kConv1Out, 3, 3});
  std::vector<double> dconv2_b(kConv2Out, 0.0);
  conv_backward_params(conv2_, t.h1, dh2, dconv2_w, dconv2_b);

  Tensor dh1 = conv_backward_input(conv2_, dh2);
  for (std::size_t i = 0; i < dh1.size(); ++i)
    dh1[i] *= 1.0 - t.h1[i] * t.h1[i];

  Tensor dconv1_w({kConv1Out, input_shape_[0], 3, 3});
  std::vector<double> dconv1_b(kConv1Out, 0.0);
  conv_backward_params(conv1_, x, dh1, dconv1_w, dconv1_b);

  std::vector<double> grad;
  grad.reserve(param_count());
  grad.insert(grad.end(), dconv1_w.values().begin(), dconv1_w.values().end());
  grad.insert(grad.end(), dconv1_b.begin(), dconv1_b.end());
  grad.insert(grad.end(), dconv2_w.values().begin(), dconv2_w.values().end());
  grad.insert(grad.end(), dconv2_b.begin(), dconv2_b.end());
  grad.insert(grad.end(), dhead_w.values().begin(), dhead_w.values().end());
  grad.insert(grad.end(), dhead_b.begin(), dhead_b.end());
  return grad;
}

std::size_t ContextNetwork::param_count() const {
  return conv1_.weight.size() + conv1_.bias.size() + conv2_.weight.size() +
         conv2_.bias.size() + head_.weight.size() + head_.bias.size();
}

std::vector<double> ContextNetwork::params() const {
  std::vector<double> out;
  out.reserve(param_count());
  out.insert(out.end(), conv1_.weight.values().begin(), conv1_.weight.values().end());
  out.insert(out.end(), conv1_.bias.begin(), conv1_.bias.end());
  out.insert(out.end(), conv2_.weight.values().begin(), conv2_.weight.values().end());
  out.insert(out.end(), conv2_.bias.begin(), conv2_.bias.end());
  out.insert(out.end(), head_.weight.values().begin(), head_.weight.values().end());
  out.insert(out.end(), head_.bias.begin(), head_.bias.end());
  return out;
}

void ContextNetwork::set_params(const std::vector<double>& params) {
  if (params.size() != param_count())
    throw std::invalid_argument("ContextNetwork: parameter vector size mismatch");
  std::size_t pos = 0;
  auto take_tensor = [&](Tensor& t) {
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = params[pos++];
  };
  auto take_vec = [&](std::vector<double>& v) {
    for (double& x : v) x = params[pos++];
  };
  take_tensor(conv1_.weight);
  take_vec(conv1_.bias);
  take_tensor(conv2_.weight);
  take_vec(conv2_.bias);
  take_tensor(head_.weight);
  take_vec(head_.bias);
}

}  // namespace bee
