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
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "bee/rng.hpp"
#include "bee/tensor.hpp"
#include "support.hpp"

namespace bee {
namespace {

// Independent scalar evaluation of the cubic-convolution kernel (a = -0.5).
double catmull_rom_kernel(double d) {
  const double a = -0.5;
  const double x = std::abs(d);
  if (x <= 1.0) return (a + 2.0) * x * x * x - (a + 3.0) * x * x + 1.0;
  if (x < 2.0) return a * (x * x * x - 5.0 * x * x + 8.0 * x - 4.0);
  return 0.0;
}

double bicubic_reference_pixel(const Tensor& src, std::size_t out_h,
                               std::size_t out_w, std::size_t oy,
                               std::size_t ox) {
  const double sy = (oy + 0.5) * static_cast<double>(src.dim(0)) / out_h - 0.5;
  const double sx = (ox + 0.5) * static_cast<double>(src.dim(1)) / out_w - 0.5;
  double acc = 0.0;
  const long long iy = static_cast<long long>(std::floor(sy));
  const long long ix = static_cast<long long>(std::floor(sx));
  for (long long m = iy - 1; m <= iy + 2; ++m) {
    for (long long n = ix - 1; n <= ix + 2; ++n) {
      const std::size_t cy = static_cast<std::size_t>(
          std::clamp(m, 0LL, static_cast<long long>(src.dim(0)) - 1));
      const std::size_t cx = static_cast<std::size_t>(
          std::clamp(n, 0LL, static_cast<long long>(src.dim(1)) - 1));
      acc += catmull_rom_kernel(sy - static_cast<double>(m)) *
             catmull_rom_kernel(sx - static_cast<double>(n)) * src(cy, cx);
    }
  }
  return acc;
}

TEST_SUITE_BEGIN("tensor");

TEST_CASE("tensor construction validates shape and data") {
  CHECK_THROWS_AS(Tensor({0, 3}), std::invalid_argument);
  CHECK_THROWS_AS(Tensor({2, 2}, {1.0, 2.0, 3.0}), std::invalid_argument);
  CHECK_THROWS_AS(Tensor(std::vector<std::size_t>{}), std::invalid_argument);
  const Tensor t({2, 3}, 1.5);
  CHECK(t.size() == 6);
  CHECK(t(1, 2) == 1.5);
}

TEST_CASE("bicubic resize keeps constant images constant") {
  const Tensor src({4, 4}, 3.0);
  const Tensor up = bicubic_resize(src, 8, 8);
  REQUIRE(up.shape() == std::vector<std::size_t>{8, 8});
  for (std::size_t i = 0; i < up.size(); ++i)
    CHECK(up[i] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("bicubic resize to the same dims is the identity") {
  Rng rng(3);
  const Tensor src = test::random_tensor({5, 6}, rng, -2.0, 2.0);
  const Tensor same = bicubic_resize(src, 5, 6);
  CHECK(test::max_abs_diff(src, same) == 0.0);
}

TEST_CASE("bicubic resize matches a direct kernel evaluation") {
  const Tensor src({2, 2}, {0.0, 1.0, 1.0, 0.0});
  const Tensor out = bicubic_resize(src, 7, 7);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 7; ++j)
      CHECK(out(i, j) ==
            doctest::Approx(bicubic_reference_pixel(src, 7, 7, i, j))
                .epsilon(1e-12));
}

TEST_CASE("bicubic resize round trip reproduces a constant exactly") {
  const Tensor src({3, 5}, 0.25);
  const Tensor round = bicubic_resize(bicubic_resize(src, 9, 11), 3, 5);
  for (std::size_t i = 0; i < round.size(); ++i)
    CHECK(round[i] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("bicubic resize rejects degenerate inputs") {
  CHECK_THROWS_AS(bicubic_resize(Tensor({1, 4}, 0.0), 2, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(bicubic_resize(Tensor({4, 4}, 0.0), 0, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(bicubic_resize(Tensor({2, 2, 2}, 0.0), 2, 2),
                  std::invalid_argument);
}

TEST_CASE("gaussian blur with sigma zero returns the input unchanged") {
  Rng rng(4);
  const Tensor src = test::random_tensor({3, 4, 4}, rng);
  const Tensor out = gaussian_blur(src, 0.0);
  CHECK(test::max_abs_diff(src, out) == 0.0);
}

TEST_CASE("gaussian blur keeps constants constant") {
  const Tensor src({4, 4}, 2.5);
  for (double sigma : {0.3, 1.0, 7.0}) {
    const Tensor out = gaussian_blur(src, sigma);
    for (std::size_t i = 0; i < out.size(); ++i)
      CHECK(out[i] == doctest::Approx(2.5).epsilon(1e-12));
  }
}

TEST_CASE("gaussian blur of an impulse matches a direct convolution") {
  Tensor src({1, 5}, 0.0);
  src(0, 2) = 1.0;
  const double sigma = 1.0;
  const Tensor out = gaussian_blur(src, sigma);

  // Normalized weights over radius ceil(3 sigma) = 3, clamped at the edges.
  const int radius = 3;
  std::vector<double> w(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    w[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += w[i + radius];
  }
  for (double& v : w) v /= sum;
  for (int j = 0; j < 5; ++j) {
    double want = 0.0;
    for (int k = -radius; k <= radius; ++k) {
      const int src_col = std::clamp(j + k, 0, 4);
      want += w[k + radius] * (src_col == 2 ? 1.0 : 0.0);
    }
    CHECK(out(0, j) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("gaussian blur conserves the mass of an interior impulse") {
  Tensor src({25, 25}, 0.0);
  src(12, 12) = 1.0;
  const Tensor out = gaussian_blur(src, 2.0);
  double total = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) total += out[i];
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gaussian blur rejects negative sigma") {
  CHECK_THROWS_AS(gaussian_blur(Tensor({2, 2}, 0.0), -0.1),
                  std::invalid_argument);
}

TEST_CASE("softmax rows handles uniform, huge and analytic inputs") {
  const Tensor zeros({1, 4}, 0.0);
  const Tensor u = softmax_rows(zeros);
  for (std::size_t j = 0; j < 4; ++j) CHECK(u(0, j) == doctest::Approx(0.25));

  const Tensor big({1, 2}, {1000.0, 1000.0});
  const Tensor stable = softmax_rows(big);
  CHECK(stable(0, 0) == doctest::Approx(0.5));
  CHECK(stable(0, 1) == doctest::Approx(0.5));

  const Tensor analytic({1, 2}, {0.0, std::log(3.0)});
  const Tensor p = softmax_rows(analytic);
  CHECK(p(0, 0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(p(0, 1) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("softmax rows sum to one across magnitudes") {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const double scale = std::pow(10.0, rng.uniform(-6.0, 3.0));
    Tensor m({3, 5});
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = scale * rng.normal();
    const Tensor p = softmax_rows(m);
    for (std::size_t i = 0; i < 3; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < 5; ++j) {
        // Entries can underflow to exactly 0 at extreme magnitudes.
        CHECK(p(i, j) >= 0.0);
        CHECK(p(i, j) <= 1.0);
        sum += p(i, j);
      }
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("trapezoid AUC on analytic curves") {
  CHECK(trapezoid_auc({{0.0, 1.0}, {0.0, 1.0}}) == doctest::Approx(0.5));
  CHECK(trapezoid_auc({{0.2, 0.5, 0.9}, {0.7, 0.7, 0.7}}) ==
        doctest::Approx(0.7));
}

TEST_CASE("trapezoid AUC matches a fine Riemann sum") {
  const Curve curve{{0.0, 0.5, 1.0}, {0.0, 1.0, 0.0}};
  double riemann = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) / n;
    riemann += (x <= 0.5 ? 2.0 * x : 2.0 * (1.0 - x)) / n;
  }
  CHECK(trapezoid_auc(curve) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(trapezoid_auc(curve) - riemann) <= 1e-6);
}

TEST_CASE("trapezoid AUC rejects invalid curves") {
  CHECK_THROWS_AS(trapezoid_auc({{0.5, 0.5}, {0.0, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(trapezoid_auc({{0.0, 1.0}, {0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(trapezoid_auc({{0.5, 0.2}, {0.0, 1.0}}),
                  std::invalid_argument);
}

TEST_CASE("channel stats on hand-built and seeded tensors") {
  Tensor two({2, 2, 2}, 0.0);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      two(0, i, j) = 1.0;
      two(1, i, j) = 3.0;
    }
  const ChannelStats stats = channel_stats(two);
  CHECK(stats.mean_map(0, 0) == doctest::Approx(2.0));
  CHECK(stats.channel_min == std::vector<double>{1.0, 3.0});
  CHECK(stats.channel_max == std::vector<double>{1.0, 3.0});

  Rng rng(12);
  const Tensor t = test::random_tensor({3, 4, 5}, rng, -1.0, 2.0);
  const ChannelStats s = channel_stats(t);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      double mean = 0.0;
      for (std::size_t c = 0; c < 3; ++c) mean += t(c, i, j) / 3.0;
      CHECK(s.mean_map(i, j) == doctest::Approx(mean).epsilon(1e-15));
    }
  for (std::size_t c = 0; c < 3; ++c) {
    double lo = t(c, 0, 0), hi = t(c, 0, 0);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 5; ++j) {
        lo = std::min(lo, t(c, i, j));
        hi = std::max(hi, t(c, i, j));
      }
    CHECK(s.channel_min[c] == lo);
    CHECK(s.channel_max[c] == hi);
  }
}

TEST_CASE("channel stats of a single channel reproduces it") {
  Rng rng(13);
  const Tensor t = test::random_tensor({1, 3, 3}, rng);
  const ChannelStats s = channel_stats(t);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(s.mean_map(i, j) == t(0, i, j));
}

TEST_CASE("minmax normalize") {
  const Tensor m({2, 2}, {1.0, 3.0, 5.0, 7.0});
  const Tensor n = minmax_normalize(m);
  CHECK(n(0, 0) == doctest::Approx(0.0));
  CHECK(n(0, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(n(1, 0) == doctest::Approx(2.0 / 3.0));
  CHECK(n(1, 1) == doctest::Approx(1.0));

  const Tensor constant({3, 3}, 4.2);
  const Tensor z = minmax_normalize(constant);
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(z[i] == 0.0);

  Rng rng(14);
  const Tensor r = test::random_tensor({4, 4}, rng, -5.0, 5.0);
  const Tensor rn = minmax_normalize(r);
  double lo = 1.0, hi = 0.0;
  for (std::size_t i = 0; i < rn.size(); ++i) {
    lo = std::min(lo, rn[i]);
    hi = std::max(hi, rn[i]);
  }
  CHECK(lo == 0.0);
  CHECK(hi == 1.0);
}

TEST_SUITE_END();

}  // namespace
}  // namespace bee
