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
#ifndef BEE_TENSOR_HPP_
#define BEE_TENSOR_HPP_

#include <cstddef>
#include <vector>

namespace bee {

// Dense row-major tensor of doubles, rank 1 to 4.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
  Tensor(std::vector<std::size_t> shape, std::vector<double> values);

  std::size_t rank() const { return shape_.size(); }
  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t dim(std::size_t axis) const { return shape_[axis]; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double operator[](std::size_t flat) const { return values_[flat]; }
  double& operator[](std::size_t flat) { return values_[flat]; }

  // Rank-2 access.
  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * shape_[1] + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return values_[i * shape_[1] + j];
  }

  // Rank-3 access.
  double operator()(std::size_t c, std::size_t i, std::size_t j) const {
    return values_[(c * shape_[1] + i) * shape_[2] + j];
  }
  double& operator()(std::size_t c, std::size_t i, std::size_t j) {
    return values_[(c * shape_[1] + i) * shape_[2] + j];
  }

  // Rank-4 access.
  double operator()(std::size_t a, std::size_t b, std::size_t c,
                    std::size_t d) const {
    return values_[((a * shape_[1] + b) * shape_[2] + c) * shape_[3] + d];
  }
  double& operator()(std::size_t a, std::size_t b, std::size_t c,
                     std::size_t d) {
    return values_[((a * shape_[1] + b) * shape_[2] + c) * shape_[3] + d];
  }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  bool all_finite() const;

  Tensor& operator+=(const Tensor& other);
  Tensor& operator-=(const Tensor& other);
  Tensor& operator*=(double s);

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> values_;
};

Tensor operator+(Tensor a, const Tensor& b);
Tensor operator-(Tensor a, const Tensor& b);
Tensor operator*(Tensor a, double s);
// Elementwise (Hadamard) product.
Tensor hadamard(Tensor a, const Tensor& b);

// Piecewise-linear curve with non-decreasing abscissae in [0, 1].
struct Curve {
  std::vector<double> xs;
  std::vector<double> ys;
};

struct ChannelStats {
  Tensor mean_map;                   // per-position mean over channels
  std::vector<double> channel_min;
  std::vector<double> channel_max;
};

// Catmull-Rom bicubic resize (a = -0.5) with edge-clamped sampling.
// Input must be rank 2 with both extents >= 2; output extents >= 1.
Tensor bicubic_resize(const Tensor& map, std::size_t out_h, std::size_t out_w);

// Separable Gaussian blur with kernel radius ceil(3*sigma) and renormalized
// truncated weights, edge-clamped. Rank-3 inputs are blurred per channel.
// sigma = 0 returns the input unchanged.
Tensor gaussian_blur(const Tensor& t, double sigma);

// Row-wise softmax of a rank-2 tensor, stabilized by row-max subtraction.
Tensor softmax_rows(const Tensor& m);

// Trapezoid-rule area under the curve, normalized by the abscissa span so
// a constant curve returns that constant.
double trapezoid_auc(const Curve& curve);

// Per-position channel mean plus per-channel extrema of a rank-3 tensor.
ChannelStats channel_stats(const Tensor& t);

// Affine rescale to [0, 1]; a constant input maps to all zeros.
Tensor minmax_normalize(const Tensor& map);

}  // namespace bee

#endif  // BEE_TENSOR_HPP_
