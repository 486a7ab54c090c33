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
#include "bee/nn.hpp"

#include <cmath>
#include <stdexcept>

namespace bee {

Tensor conv_forward(const Conv2d& conv, const Tensor& x) {
  if (x.rank() != 3 || x.dim(0) != conv.in_channels())
    throw std::invalid_argument("conv_forward: input shape mismatch");
  const std::size_t h = x.dim(1), w = x.dim(2);
  const std::size_t oc = conv.out_channels(), ic = conv.in_channels();
  Tensor out({oc, h, w});
  for (std::size_t o = 0; o < oc; ++o) {
    for (std::size_t i = 0; i < h; ++i) {
      for (std::size_t j = 0; j < w; ++j) {
        double acc = conv.bias[o];
        for (std::size_t c = 0; c < ic; ++c) {
          for (std::size_t di = 0; di < 3; ++di) {
            const long long si = static_cast<long long>(i) + di - 1;
            if (si < 0 || si >= static_cast<long long>(h)) continue;
            for (std::size_t dj = 0; dj < 3; ++dj) {
              const long long sj = static_cast<long long>(j) + dj - 1;
              if (sj < 0 || sj >= static_cast<long long>(w)) continue;
              acc += conv.weight(o, c, di, dj) *
                     x(c, static_cast<std::size_t>(si),
                       static_cast<std::size_t>(sj));
            }
          }
        }
        out(o, i, j) = acc;
      }
    }
  }
  return out;
}

Tensor conv_backward_input(const Conv2d& conv, const Tensor& dout) {
  if (dout.rank() != 3 || dout.dim(0) != conv.out_channels())
    throw std::invalid_argument("conv_backward_input: gradient shape mismatch");
  const std::size_t h = dout.dim(1), w = dout.dim(2);
  const std::size_t oc = conv.out_channels(), ic = conv.in_channels();
  Tensor dx({ic, h, w});
  for (std::size_t o = 0; o < oc; ++o) {
    for (std::size_t i = 0; i < h; ++i) {
      for (std::size_t j = 0; j < w; ++j) {
        const double g = dout(o, i, j);
        if (g == 0.0) continue;
        for (std::size_t c = 0; c < ic; ++c) {
          for (std::size_t di = 0; di < 3; ++di) {
            const long long si = static_cast<long long>(i) + di - 1;
            if (si < 0 || si >= static_cast<long long>(h)) continue;
            for (std::size_t dj = 0; dj < 3; ++dj) {
              const long long sj = static_cast<long long>(j) + dj - 1;
              if (sj < 0 || sj >= static_cast<long long>(w)) continue;
              dx(c, static_cast<std::size_t>(si), static_cast<std::size_t>(sj)) +=
                  g * conv.weight(o, c, di, dj);
            }
          }
        }
      }
    }
  }
  return dx;
}

void conv_backward_params(const Conv2d& conv, const Tensor& x,
                          const Tensor& dout, Tensor& dweight,
                          std::vector<double>& dbias) {
  const std::size_t h = x.dim(1), w = x.dim(2);
  const std::size_t oc = conv.out_channels(), ic = conv.in_channels();
  for (std::size_t o = 0; o < oc; ++o) {
    for (std::size_t i = 0; i < h; ++i) {
      for (std::size_t j = 0; j < w; ++j) {
        const double g = dout(o, i, j);
        if (g == 0.0) continue;
        dbias[o] += g;
        for (std::size_t c = 0; c < ic; ++c) {
          for (std::size_t di = 0; di < 3; ++di) {
            const long long si = static_cast<long long>(i) + di - 1;
            if (si < 0 || si >= static_cast<long long>(h)) continue;
            for (std::size_t dj = 0; dj < 3; ++dj) {
              const long long sj = static_cast<long long>(j) + dj - 1;
              if (sj < 0 || sj >= static_cast<long long>(w)) continue;
              dweight(o, c, di, dj) +=
                  g * x(c, static_cast<std::size_t>(si),
                        static_cast<std::size_t>(sj));
            }
          }
        }
      }
    }
  }
}

std::vector<double> linear_forward(const Linear& lin,
                                   const std::vector<double>& x) {
  const std::size_t out = lin.weight.dim(0), in = lin.weight.dim(1);
  if (x.size() != in)
    throw std::invalid_argument("linear_forward: input size mismatch");
  std::vector<double> y(out);
  for (std::size_t o = 0; o < out; ++o) {
    double acc = lin.bias[o];
    for (std::size_t i = 0; i < in; ++i) acc += lin.weight(o, i) * x[i];
    y[o] = acc;
  }
  return y;
}

Tensor tanh_map(Tensor t) {
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = std::tanh(t[i]);
  return t;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0))
    throw std::invalid_argument("matmul: shape mismatch");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  Tensor out({m, n});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t p = 0; p < k; ++p) {
      const double av = a(i, p);
      if (av == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += av * b(p, j);
    }
  return out;
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(1))
    throw std::invalid_argument("matmul_nt: shape mismatch");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(0);
  Tensor out({m, n});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += a(i, p) * b(j, p);
      out(i, j) = acc;
    }
  return out;
}

Tensor matmul_tn(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dim(0) != b.dim(0))
    throw std::invalid_argument("matmul_tn: shape mismatch");
  const std::size_t m = a.dim(1), k = a.dim(0), n = b.dim(1);
  Tensor out({m, n});
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t i = 0; i < m; ++i) {
      const double av = a(p, i);
      if (av == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += av * b(p, j);
    }
  return out;
}

}  // namespace bee
