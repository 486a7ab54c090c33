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
#include "bee/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bee {

Tensor finite_diff_grad(const DifferentiableModel& model, std::size_t layer,
                        const Tensor& rep, std::size_t target, double eps,
                        const ForwardTrace* context) {
  if (eps <= 0.0)
    throw std::invalid_argument("finite_diff_grad: eps must be positive");
  Tensor probe = rep;
  Tensor grad(rep.shape());
  for (std::size_t i = 0; i < rep.size(); ++i) {
    const double orig = probe[i];
    probe[i] = orig + eps;
    const double hi = model.forward_from(layer, probe, context)[target];
    probe[i] = orig - eps;
    const double lo = model.forward_from(layer, probe, context)[target];
    probe[i] = orig;
    grad[i] = (hi - lo) / (2.0 * eps);
  }
  return grad;
}

std::vector<double> softmax(const std::vector<double>& logits) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - mx);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(
      std::distance(v.begin(), std::max_element(v.begin(), v.end())));
}

}  // namespace bee
