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
#ifndef BEE_MODEL_HPP_
#define BEE_MODEL_HPP_

#include <cstdint>
#include <memory>
#include <vector>

#include "bee/tensor.hpp"

namespace bee {

// Result of a full forward pass. reps[0] is the input itself, reps[l] the
// layer-l representation, for l in [0, layer_count]. `cache` carries
// model-specific intermediates that layer-conditioned calls may need.
struct ForwardTrace {
  std::vector<Tensor> reps;
  std::vector<double> logits;
  std::shared_ptr<const void> cache;
};

// Layered differentiable classifier: forward passes, sub-network evaluation
// from any layer, and exact gradients of a class logit w.r.t. any
// intermediate representation. Implementations are immutable after
// construction; all calls are pure.
class DifferentiableModel {
 public:
  virtual ~DifferentiableModel() = default;

  virtual std::size_t layer_count() const = 0;
  virtual std::size_t class_count() const = 0;
  virtual std::vector<std::size_t> input_shape() const = 0;
  virtual std::vector<std::size_t> layer_shape(std::size_t layer) const = 0;

  virtual ForwardTrace forward(const Tensor& x) const = 0;

  // Logits of the sub-network that starts at `layer` with representation
  // `rep`. Models whose intermediate representations do not determine the
  // downstream computation alone (attention models) require the trace of the
  // underlying input in `context`.
  virtual std::vector<double> forward_from(
      std::size_t layer, const Tensor& rep,
      const ForwardTrace* context = nullptr) const = 0;

  // Exact reverse-mode gradient of the class-`target` logit of the
  // sub-network at `rep`; same shape as `rep`.
  virtual Tensor grad_wrt_layer(std::size_t layer, const Tensor& rep,
                                std::size_t target,
                                const ForwardTrace* context = nullptr) const = 0;
};

// Central-difference gradient estimate, elementwise:
// (f(r + eps*e_i) - f(r - eps*e_i)) / (2*eps).
Tensor finite_diff_grad(const DifferentiableModel& model, std::size_t layer,
                        const Tensor& rep, std::size_t target, double eps,
                        const ForwardTrace* context = nullptr);

// Per-block attention tensors (heads x tokens x tokens) and the gradients of
// a class logit w.r.t. each of them, both taken on the unmodified forward.
struct AttentionTrace {
  std::vector<Tensor> attention;
  std::vector<Tensor> grads;
};

class AttentionModel : public DifferentiableModel {
 public:
  virtual std::size_t block_count() const = 0;
  virtual std::size_t head_count() const = 0;
  virtual std::size_t token_count() const = 0;
  virtual AttentionTrace attention_trace(const Tensor& x,
                                         std::size_t target) const = 0;
};

std::vector<double> softmax(const std::vector<double>& logits);

std::size_t argmax(const std::vector<double>& v);

}  // namespace bee

#endif  // BEE_MODEL_HPP_
