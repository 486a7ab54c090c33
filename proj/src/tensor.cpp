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
#include "bee/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bee {

namespace {

std::size_t checked_size(const std::vector<std::size_t>& shape) {
  if (shape.empty() || shape.size() > 4)
    throw std::invalid_argument("Tensor: rank must be between 1 and 4");
  std::size_t n = 1;
  for (std::size_t d : shape) {
    if (d == 0) throw std::invalid_argument("Tensor: zero extent");
    n *= d;
  }
  return n;
}

// Catmull-Rom weights (cubic convolution, a = -0.5) for offset t in [0, 1).
void catmull_rom_weights(double t, double w[4]) {
  constexpr double a = -0.5;
  const double t2 = t * t;
  const double t3 = t2 * t;
  w[0] = a * (t3 - 2.0 * t2 + t);
  w[1] = (a + 2.0) * t3 - (a + 3.0) * t2 + 1.0;
  w[2] = -(a + 2.0) * t3 + (2.0 * a + 3.0) * t2 - a * t;
  w[3] = a * (t2 - t3);
}

std::size_t clamp_index(long long i, std::size_t n) {
  if (i < 0) return 0;
  if (i >= static_cast<long long>(n)) return n - 1;
  return static_cast<std::size_t>(i);
}

// 1D Gaussian pass along the last axis of a (rows x cols) view.
void blur_axis(const double* src, double* dst, std::size_t rows,
               std::size_t cols, std::size_t row_stride,
               std::size_t col_stride, const std::vector<double>& kernel) {
  const long long radius = static_cast<long long>(kernel.size() / 2);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (long long k = -radius; k <= radius; ++k) {
        const std::size_t cc = clamp_index(static_cast<long long>(c) + k, cols);
        acc += kernel[static_cast<std::size_t>(k + radius)] *
               src[r * row_stride + cc * col_stride];
      }
      dst[r * row_stride + c * col_stride] = acc;
    }
  }
}

void blur_plane(const double* src, double* dst, std::size_t h, std::size_t w,
                const std::vector<double>& kernel) {
  std::vector<double> tmp(h * w);
  // Horizontal pass then vertical pass.
  blur_axis(src, tmp.data(), h, w, w, 1, kernel);
  blur_axis(tmp.data(), dst, w, h, 1, w, kernel);
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)), values_(checked_size(shape_), fill) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (checked_size(shape_) != values_.size())
    throw std::invalid_argument("Tensor: data length does not match shape");
}

bool Tensor::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

Tensor& Tensor::operator+=(const Tensor& other) {
  if (!same_shape(other)) throw std::invalid_argument("Tensor +=: shape mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& other) {
  if (!same_shape(other)) throw std::invalid_argument("Tensor -=: shape mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Tensor& Tensor::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
Tensor operator*(Tensor a, double s) { return a *= s; }

Tensor hadamard(Tensor a, const Tensor& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("hadamard: shape mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  return a;
}

Tensor bicubic_resize(const Tensor& map, std::size_t out_h, std::size_t out_w) {
  if (map.rank() != 2)
    throw std::invalid_argument("bicubic_resize: expected a rank-2 tensor");
  const std::size_t in_h = map.dim(0);
  const std::size_t in_w = map.dim(1);
  if (in_h < 2 || in_w < 2)
    throw std::invalid_argument("bicubic_resize: input extents must be >= 2");
  if (out_h < 1 || out_w < 1)
    throw std::invalid_argument("bicubic_resize: output extents must be >= 1");

  Tensor out({out_h, out_w});
  const double scale_y = static_cast<double>(in_h) / static_cast<double>(out_h);
  const double scale_x = static_cast<double>(in_w) / static_cast<double>(out_w);
  for (std::size_t oy = 0; oy < out_h; ++oy) {
    const double sy = (static_cast<double>(oy) + 0.5) * scale_y - 0.5;
    const double fy = std::floor(sy);
    const long long iy = static_cast<long long>(fy);
    double wy[4];
    catmull_rom_weights(sy - fy, wy);
    for (std::size_t ox = 0; ox < out_w; ++ox) {
      const double sx = (static_cast<double>(ox) + 0.5) * scale_x - 0.5;
      const double fx = std::floor(sx);
      const long long ix = static_cast<long long>(fx);
      double wx[4];
      catmull_rom_weights(sx - fx, wx);
      double acc = 0.0;
      for (int m = 0; m < 4; ++m) {
        const std::size_t yy = clamp_index(iy - 1 + m, in_h);
        for (int n = 0; n < 4; ++n) {
          const std::size_t xx = clamp_index(ix - 1 + n, in_w);
          acc += wy[m] * wx[n] * map(yy, xx);
        }
      }
      out(oy, ox) = acc;
    }
  }
  return out;
}

Tensor gaussian_blur(const Tensor& t, double sigma) {
  if (sigma < 0.0)
    throw std::invalid_argument("gaussian_blur: sigma must be non-negative");
  if (t.rank() != 2 && t.rank() != 3)
    throw std::invalid_argument("gaussian_blur: expected rank 2 or 3");
  if (sigma == 0.0) return t;

  const std::size_t radius =
      static_cast<std::size_t>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    const double d = static_cast<double>(i) - static_cast<double>(radius);
    kernel[i] = std::exp(-0.5 * d * d / (sigma * sigma));
    sum += kernel[i];
  }
  for (double& k : kernel) k /= sum;

  Tensor out = t;
  if (t.rank() == 2) {
    blur_plane(t.values().data(), out.values().data(), t.dim(0), t.dim(1),
               kernel);
  } else {
    const std::size_t h = t.dim(1), w = t.dim(2);
    for (std::size_t c = 0; c < t.dim(0); ++c) {
      blur_plane(t.values().data() + c * h * w,
                 out.values().data() + c * h * w, h, w, kernel);
    }
  }
  return out;
}

Tensor softmax_rows(const Tensor& m) {
  if (m.rank() != 2)
    throw std::invalid_argument("softmax_rows: expected a rank-2 tensor");
  Tensor out = m;
  const std::size_t rows = m.dim(0), cols = m.dim(1);
  for (std::size_t i = 0; i < rows; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < cols; ++j) mx = std::max(mx, m(i, j));
    double sum = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      out(i, j) = std::exp(m(i, j) - mx);
      sum += out(i, j);
    }
    for (std::size_t j = 0; j < cols; ++j) out(i, j) /= sum;
  }
  return out;
}

double trapezoid_auc(const Curve& curve) {
  const auto& xs = curve.xs;
  const auto& ys = curve.ys;
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("trapezoid_auc: need matching xs/ys of length >= 2");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] < xs[i - 1])
      throw std::invalid_argument("trapezoid_auc: xs must be non-decreasing");
  }
  const double span = xs.back() - xs.front();
  if (span <= 0.0)
    throw std::invalid_argument("trapezoid_auc: abscissa span must be positive");
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    area += 0.5 * (ys[i] + ys[i + 1]) * (xs[i + 1] - xs[i]);
  return area / span;
}

ChannelStats channel_stats(const Tensor& t) {
  if (t.rank() != 3)
    throw std::invalid_argument("channel_stats: expected a rank-3 tensor");
  const std::size_t c = t.dim(0), h = t.dim(1), w = t.dim(2);
  ChannelStats stats;
  stats.mean_map = Tensor({h, w});
  stats.channel_min.assign(c, std::numeric_limits<double>::infinity());
  stats.channel_max.assign(c, -std::numeric_limits<double>::infinity());
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t i = 0; i < h; ++i) {
      for (std::size_t j = 0; j < w; ++j) {
        const double v = t(ch, i, j);
        stats.mean_map(i, j) += v / static_cast<double>(c);
        stats.channel_min[ch] = std::min(stats.channel_min[ch], v);
        stats.channel_max[ch] = std::max(stats.channel_max[ch], v);
      }
    }
  }
  return stats;
}

Tensor minmax_normalize(const Tensor& map) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < map.size(); ++i) {
    lo = std::min(lo, map[i]);
    hi = std::max(hi, map[i]);
  }
  Tensor out = map;
  if (hi <= lo) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.0;
    return out;
  }
  const double inv = 1.0 / (hi - lo);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (out[i] - lo) * inv;
  return out;
}

}  // namespace bee
