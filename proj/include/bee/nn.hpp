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
#ifndef BEE_NN_HPP_
#define BEE_NN_HPP_

#include <vector>

#include "bee/tensor.hpp"

namespace bee {

// 3x3 convolution, stride 1, zero padding ("same" output size).
struct Conv2d {
  Tensor weight;             // (out_ch, in_ch, 3, 3)
  std::vector<double> bias;  // out_ch

  std::size_t out_channels() const { return weight.dim(0); }
  std::size_t in_channels() const { return weight.dim(1); }
};

Tensor conv_forward(const Conv2d& conv, const Tensor& x);
// Gradient w.r.t. the convolution input given the gradient at its output.
Tensor conv_backward_input(const Conv2d& conv, const Tensor& dout);
// Accumulates parameter gradients (same shapes as weight/bias).
void conv_backward_params(const Conv2d& conv, const Tensor& x,
                          const Tensor& dout, Tensor& dweight,
                          std::vector<double>& dbias);

struct Linear {
  Tensor weight;             // (out, in)
  std::vector<double> bias;  // out
};

std::vector<double> linear_forward(const Linear& lin,
                                   const std::vector<double>& x);

// Elementwise tanh of a tensor.
Tensor tanh_map(Tensor t);

// Small dense matrix products on rank-2 tensors.
Tensor matmul(const Tensor& a, const Tensor& b);     // a (m,k) * b (k,n)
Tensor matmul_nt(const Tensor& a, const Tensor& b);  // a (m,k) * b^T (n,k)
Tensor matmul_tn(const Tensor& a, const Tensor& b);  // a^T (k,m) * b (k,n)

}  // namespace bee

#endif  // BEE_NN_HPP_
