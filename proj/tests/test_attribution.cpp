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
#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "bee/attribution.hpp"
#include "bee/dataset.hpp"
#include "bee/tiny_attention.hpp"
#include "bee/tiny_cnn.hpp"
#include "support.hpp"

namespace bee {
namespace {

TEST_SUITE_BEGIN("attribution");

TEST_CASE("interpolate endpoints and degenerate paths") {
  Rng rng(1);
  const Tensor b = test::random_tensor({2, 3, 3}, rng);
  const Tensor x = test::random_tensor({2, 3, 3}, rng);
  CHECK(test::max_abs_diff(interpolate(b, x, 4, 4), x) == 0.0);
  CHECK(test::max_abs_diff(interpolate(x, x, 2, 5), x) <= 1e-15);

  const Tensor zero({1}, 0.0);
  Tensor four({1});
  four[0] = 4.0;
  CHECK(interpolate(zero, four, 1, 4)[0] == doctest::Approx(1.0));

  CHECK_THROWS_AS(interpolate(Tensor({2}, 0.0), Tensor({3}, 0.0), 1, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(interpolate(b, x, 0, 4), std::invalid_argument);
  CHECK_THROWS_AS(interpolate(b, x, 5, 4), std::invalid_argument);
}

TEST_CASE("integrated gradients is exact on a linear model") {
  const test::LinearToyModel model = test::LinearToyModel::default_model();
  Rng rng(2);
  const Tensor x = test::random_tensor({1, 2, 2}, rng);
  const Tensor b = test::random_tensor({1, 2, 2}, rng);
  for (std::size_t steps : {1ul, 7ul}) {
    const ExplanationMap map = integrated_gradients(model, x, b, 0, steps);
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(map.raw[i] ==
            doctest::Approx(model.weight()(0, i) * (x[i] - b[i]))
                .epsilon(1e-12));
  }
}

TEST_CASE("integrated gradients on a zero-length path is the zero map") {
  const auto model = build_tiny_cnn(11);
  Rng rng(3);
  const Tensor x = test::random_tensor({3, 16, 16}, rng);
  const ExplanationMap map = integrated_gradients(*model, x, x, 1, 4);
  for (std::size_t i = 0; i < map.raw.size(); ++i) CHECK(map.raw[i] == 0.0);
  for (std::size_t i = 0; i < map.map.size(); ++i) CHECK(map.map[i] == 0.0);
}

TEST_CASE("integrated gradients satisfies completeness on the smooth cnn") {
  const auto model = build_tiny_cnn(derive_seed(7, 1));
  const Dataset data = synth_dataset(7, 2, Split::kTest, {3, 16, 16}, 4);
  const Tensor& x = data.items[0].input;
  const std::size_t y = data.items[0].label;
  const Tensor black({3, 16, 16}, 0.0);
  const double delta =
      model->forward(x).logits[y] - model->forward(black).logits[y];
  REQUIRE(std::abs(delta) > 1e-3);

  double prev = 1e18;
  for (std::size_t steps : {32ul, 64ul, 128ul, 256ul, 512ul}) {
    const ExplanationMap map = integrated_gradients(*model, x, black, y, steps);
    const double err = std::abs(map.raw_sum() - delta) / std::abs(delta);
    CHECK(err < prev);  // strictly shrinking as n doubles
    prev = err;
  }
  CHECK(prev <= 1e-3);
}

TEST_CASE("cnn map on a zero-length path is the zero map") {
  const auto model = build_tiny_cnn(21);
  Rng rng(4);
  const Tensor x = test::random_tensor({3, 16, 16}, rng);
  const ForwardTrace trace = model->forward(x);
  BaselineDraw draw;
  draw.kind = BaselineType::kConstant;
  draw.tensor = trace.reps[2];
  const ExplanationMap map = bee_map_cnn(*model, 2, x, draw, 0, 6);
  for (std::size_t i = 0; i < map.raw.size(); ++i) CHECK(map.raw[i] == 0.0);
  for (std::size_t i = 0; i < map.map.size(); ++i) CHECK(map.map[i] == 0.0);
}

TEST_CASE("cnn map with one step matches a hand-composed oracle") {
  const auto model = build_tiny_cnn(22);
  Rng rng(5);
  const Tensor x = test::random_tensor({3, 16, 16}, rng);
  const ForwardTrace trace = model->forward(x);
  const std::size_t layer = 2, target = 3;
  BaselineDraw draw;
  draw.kind = BaselineType::kConstant;
  draw.tensor = test::random_tensor(model->layer_shape(layer), rng, -0.5, 0.5);

  const ExplanationMap map =
      bee_map_cnn(*model, layer, x, draw, target, 1);

  // With n = 1 the only interpolation node is x^l itself.
  const Tensor& x_l = trace.reps[layer];
  const Tensor g = model->grad_wrt_layer(layer, x_l, target, &trace);
  Tensor raw(x_l.shape());
  for (std::size_t i = 0; i < raw.size(); ++i)
    raw[i] = (x_l[i] - draw.tensor[i]) * (g[i] * x_l[i]);
  CHECK(test::max_abs_diff(map.raw, raw) <= 1e-15);

  Tensor mean({16, 16});
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < raw.dim(0); ++c) acc += raw(c, i, j);
      mean(i, j) = acc / static_cast<double>(raw.dim(0));
    }
  CHECK(test::max_abs_diff(map.map, minmax_normalize(mean)) <= 1e-15);
}

TEST_CASE("identical calls produce bitwise-identical maps") {
  const auto model = build_tiny_cnn(23);
  Rng rng(6);
  const Tensor x = test::random_tensor({3, 16, 16}, rng);
  BaselineDraw draw;
  draw.kind = BaselineType::kConstant;
  draw.tensor = Tensor(model->layer_shape(2), 0.25);
  const ExplanationMap a = bee_map_cnn(*model, 2, x, draw, 1, 5);
  const ExplanationMap b = bee_map_cnn(*model, 2, x, draw, 1, 5);
  CHECK(a.map.values() == b.map.values());
  CHECK(a.raw.values() == b.raw.values());
}

TEST_CASE("path integration rejects bad arguments") {
  const auto model = build_tiny_cnn(24);
  Rng rng(7);
  const Tensor x = test::random_tensor({3, 16, 16}, rng);
  CHECK_THROWS_AS(
      path_integration_map(*model, 1, x, Tensor({3, 16, 16}, 0.0), 0, 4,
                           Integrand::kGradient),
      std::invalid_argument);  // baseline shape must match layer 1
  CHECK_THROWS_AS(
      path_integration_map(*model, 0, x, Tensor({3, 16, 16}, 0.0), 0, 0,
                           Integrand::kGradient),
      std::invalid_argument);  // steps must be >= 1
}

TEST_CASE("gradient rollout with zero gradients is the identity readout") {
  AttentionTrace trace;
  trace.attention.push_back(Tensor({2, 4, 4}, 0.25));
  trace.grads.push_back(Tensor({2, 4, 4}, 0.0));
  trace.attention.push_back(Tensor({2, 4, 4}, 0.25));
  trace.grads.push_back(Tensor({2, 4, 4}, 0.0));
  const std::vector<double> row = gradient_rollout(trace);
  REQUIRE(row.size() == 4);
  CHECK(row[0] == 1.0);
  for (std::size_t j = 1; j < 4; ++j) CHECK(row[j] == 0.0);
}

TEST_CASE("gradient rollout matches hand matrix arithmetic") {
  // Single block, single head, 3 tokens.
  Tensor a({1, 3, 3}, {0.6, 0.3, 0.1,  //
                       0.2, 0.5, 0.3,  //
                       0.1, 0.1, 0.8});
  Tensor g({1, 3, 3}, {1.0, -1.0, 0.5,  //
                       0.0, 2.0, -0.5,  //
                       1.5, 0.0, 1.0});
  AttentionTrace trace;
  trace.attention.push_back(a);
  trace.grads.push_back(g);
  const std::vector<double> row = gradient_rollout(trace);
  // A' = I + A.G elementwise; row 0 of A' is the answer for one block.
  CHECK(row[0] == doctest::Approx(1.0 + 0.6 * 1.0));
  CHECK(row[1] == doctest::Approx(0.3 * -1.0));
  CHECK(row[2] == doctest::Approx(0.1 * 0.5));
}

TEST_CASE("a zero-gradient second block is an identity factor") {
  Rng rng(8);
  AttentionTrace one, two;
  Tensor a({2, 4, 4});
  for (std::size_t h = 0; h < 2; ++h)
    for (std::size_t i = 0; i < 4; ++i) {
      double sum = 0.0;
      std::vector<double> vals(4);
      for (std::size_t j = 0; j < 4; ++j) {
        vals[j] = rng.uniform();
        sum += vals[j];
      }
      for (std::size_t j = 0; j < 4; ++j) a(h, i, j) = vals[j] / sum;
    }
  const Tensor g = test::random_tensor({2, 4, 4}, rng, -1.0, 1.0);
  one.attention = {a};
  one.grads = {g};
  two.attention = {a, a};
  two.grads = {g, Tensor({2, 4, 4}, 0.0)};
  CHECK(gradient_rollout(one) == gradient_rollout(two));
}

TEST_CASE("gradient rollout validates its inputs") {
  AttentionTrace trace;
  CHECK_THROWS_AS(gradient_rollout(trace), std::invalid_argument);
  trace.attention.push_back(Tensor({1, 3, 3}, 0.33));
  trace.grads.push_back(Tensor({1, 3, 3}, 0.0));
  trace.attention.push_back(Tensor({1, 4, 4}, 0.25));
  trace.grads.push_back(Tensor({1, 4, 4}, 0.0));
  CHECK_THROWS_AS(gradient_rollout(trace), std::invalid_argument);
}

TEST_CASE("attention map on a zero-length path is zero for one block") {
  TinyAttention::Config config;
  config.blocks = 1;
  const TinyAttention model(31, config);
  Rng rng(9);
  const Tensor x = test::random_tensor(model.input_shape(), rng);
  const ForwardTrace trace = model.forward(x);
  BaselineDraw draw;
  draw.kind = BaselineType::kConstant;
  draw.tensor = trace.reps[1];
  const ExplanationMap map = bee_map_vit(model, 1, x, draw, 0, 4);
  for (std::size_t i = 0; i < map.raw.size(); ++i) CHECK(map.raw[i] == 0.0);
  for (std::size_t i = 0; i < map.map.size(); ++i) CHECK(map.map[i] == 0.0);
}

TEST_CASE("attention map with one step matches a hand-composed oracle") {
  TinyAttention::Config config;
  config.blocks = 1;
  const TinyAttention model(32, config);
  Rng rng(10);
  const Tensor x = test::random_tensor(model.input_shape(), rng);
  const std::size_t target = 2;
  const ForwardTrace trace = model.forward(x);
  const AttentionTrace atrace = model.attention_trace(x, target);

  BaselineDraw draw;
  draw.kind = BaselineType::kNormal;
  draw.tensor = test::random_tensor(model.layer_shape(1), rng, -1.0, 1.0);
  draw = softmax_normalize_baseline(std::move(draw));

  const ExplanationMap map = bee_map_vit(model, 1, x, draw, target, 1);

  // n = 1: the single node is A itself, so the integrand uses the traced
  // attention and its gradient.
  const Tensor& attn = atrace.attention[0];
  const Tensor& grad = atrace.grads[0];
  Tensor m_att(attn.shape());
  for (std::size_t i = 0; i < m_att.size(); ++i)
    m_att[i] = (attn[i] - draw.tensor[i]) * (grad[i] * attn[i]);
  CHECK(test::max_abs_diff(map.raw, m_att) <= 1e-12);

  const std::size_t tokens = model.token_count();
  Tensor factor({tokens, tokens});
  for (std::size_t i = 0; i < tokens; ++i) {
    for (std::size_t j = 0; j < tokens; ++j) {
      double mean = 0.0;
      for (std::size_t h = 0; h < 2; ++h) mean += m_att(h, i, j) / 2.0;
      factor(i, j) = mean + (i == j ? 1.0 : 0.0);
    }
  }
  Tensor grid({3, 3});
  for (std::size_t j = 1; j < tokens; ++j)
    grid((j - 1) / 3, (j - 1) % 3) = factor(0, j);
  const Tensor want = minmax_normalize(bicubic_resize(grid, 12, 12));
  CHECK(test::max_abs_diff(map.map, want) <= 1e-12);
}

TEST_CASE("attention map rejects a non-square patch grid") {
  TinyAttention::Config config;
  config.height = 12;
  config.width = 8;  // 3x2 grid: tokens - 1 = 6 is not a perfect square
  const TinyAttention model(33, config);
  Rng rng(11);
  const Tensor x = test::random_tensor(model.input_shape(), rng);
  BaselineDraw draw;
  draw.kind = BaselineType::kConstant;
  draw.tensor = Tensor(model.layer_shape(1), 0.0);
  draw = softmax_normalize_baseline(std::move(draw));
  CHECK_THROWS_AS(bee_map_vit(model, 1, x, draw, 0, 2), std::invalid_argument);
}

TEST_CASE("average maps") {
  ExplanationMap single;
  single.map = Tensor({2, 2}, {0.0, 0.25, 0.5, 1.0});
  const ExplanationMap same = average_maps({single});
  CHECK(test::max_abs_diff(same.map, single.map) <= 1e-15);

  // Mirror-image maps average to a constant, which normalizes to zeros.
  ExplanationMap pos, neg;
  pos.map = Tensor({2, 2}, {0.0, 0.25, 0.5, 1.0});
  neg.map = Tensor({2, 2}, {1.0, 0.75, 0.5, 0.0});
  const ExplanationMap zero = average_maps({pos, neg});
  for (std::size_t i = 0; i < zero.map.size(); ++i) CHECK(zero.map[i] == 0.0);

  Rng rng(12);
  std::vector<ExplanationMap> maps(3);
  for (ExplanationMap& m : maps) m.map = test::random_tensor({3, 3}, rng);
  const ExplanationMap avg = average_maps(maps);
  Tensor mean({3, 3});
  for (std::size_t i = 0; i < mean.size(); ++i)
    mean[i] = (maps[0].map[i] + maps[1].map[i] + maps[2].map[i]) / 3.0;
  CHECK(test::max_abs_diff(avg.map, minmax_normalize(mean)) <= 1e-15);

  CHECK_THROWS_AS(average_maps({}), std::invalid_argument);
  ExplanationMap other;
  other.map = Tensor({2, 3}, 0.0);
  CHECK_THROWS_AS(average_maps({single, other}), std::invalid_argument);
}

TEST_CASE("select_best follows the direction and breaks ties low") {
  MapPool pool;
  for (int i = 0; i < 3; ++i) {
    ExplanationMap m;
    m.map = Tensor({2, 2}, static_cast<double>(i));
    m.layer = static_cast<std::size_t>(i);
    pool.maps.push_back(m);
  }
  CHECK(select_best(pool, {0.2, 0.9, 0.5}, Direction::kHigherBetter).layer == 1);
  CHECK(select_best(pool, {0.2, 0.9, 0.5}, Direction::kLowerBetter).layer == 0);
  CHECK(select_best(pool, {0.4, 0.4, 0.4}, Direction::kHigherBetter).layer == 0);
  CHECK(select_best(pool, {0.2, 0.9, 0.5}, Direction::kHigherBetter).score ==
        doctest::Approx(0.9));
  CHECK_THROWS_AS(select_best(MapPool{}, {}, Direction::kHigherBetter),
                  std::invalid_argument);
  CHECK_THROWS_AS(select_best(pool, {0.1}, Direction::kHigherBetter),
                  std::invalid_argument);
}

TEST_CASE("selection is invariant under monotone score transformations") {
  Rng rng(13);
  const auto transforms = {
      +[](double v) { return std::exp(v); },
      +[](double v) { return 3.0 * v + 1.0; },
      +[](double v) { return v * v * v; },
  };
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> scores(5);
    for (double& s : scores) s = rng.uniform(-2.0, 2.0);
    for (Direction dir : {Direction::kHigherBetter, Direction::kLowerBetter}) {
      const std::size_t base = select_best_index(scores, dir);
      for (const auto& f : transforms) {
        std::vector<double> mapped(scores.size());
        for (std::size_t i = 0; i < scores.size(); ++i) mapped[i] = f(scores[i]);
        CHECK(select_best_index(mapped, dir) == base);
      }
    }
  }
}

TEST_SUITE_END();

}  // namespace
}  // namespace bee
