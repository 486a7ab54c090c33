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
#ifndef BEE_CONTEXT_NETWORK_HPP_
#define BEE_CONTEXT_NETWORK_HPP_

#include <cstdint>
#include <vector>

#include "bee/nn.hpp"
#include "bee/tensor.hpp"

namespace bee {

// Trainable context embedder c_theta: a reduced clone of the TinyCnn feature
// extractor (two 3x3 tanh convolutions, global average pool) with a fresh
// linear head of dimension K. The final layer is linear, so the all-zero
// parameter vector maps every input to the zero context.
//
// Exposes its parameters as one flat vector so gradient-based updates and
// snapshots can treat theta as a single block.
class ContextNetwork {
 public:
  ContextNetwork() = default;  // empty; usable only after assignment
  ContextNetwork(std::vector<std::size_t> input_shape, std::size_t context_dim,
                 std::uint64_t seed);

  std::size_t context_dim() const { return context_dim_; }
  const std::vector<std::size_t>& input_shape() const { return input_shape_; }

  std::vector<double> embed(const Tensor& x) const;

  // Gradient of a scalar loss w.r.t. the flat parameter vector, given the
  // loss gradient w.r.t. the context output.
  std::vector<double> param_grad(const Tensor& x,
                                 const std::vector<double>& dloss_dcontext) const;

  std::size_t param_count() const;
  std::vector<double> params() const;
  void set_params(const std::vector<double>& params);

 private:
  struct Trace;
  Trace run(const Tensor& x) const;

  std::vector<std::size_t> input_shape_;
  std::size_t context_dim_;
  Conv2d conv1_;
  Conv2d conv2_;
  Linear head_;
};

}  // namespace bee

#endif  // BEE_CONTEXT_NETWORK_HPP_
