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
#include "bee/selftest.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "bee/attribution.hpp"
#include "bee/bandit.hpp"
#include "bee/metrics.hpp"
#include "bee/model.hpp"
#include "bee/rng.hpp"
#include "bee/snapshot.hpp"
#include "bee/tensor.hpp"
#include "bee/tiny_attention.hpp"
#include "bee/tiny_cnn.hpp"

namespace bee {

namespace {

struct Check {
  const char* name;
  std::function<bool()> run;
};

double max_rel_error(const Tensor& got, const Tensor& want) {
  double worst = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    const double denom = std::max(std::abs(want[i]), 1e-8);
    worst = std::max(worst, std::abs(got[i] - want[i]) / denom);
  }
  return worst;
}

bool softmax_rows_sum_to_one() {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const double scale = std::pow(10.0, rng.uniform(-6.0, 3.0));
    Tensor m({4, 6});
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = scale * rng.normal();
    const Tensor p = softmax_rows(m);
    for (std::size_t i = 0; i < p.dim(0); ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < p.dim(1); ++j) sum += p(i, j);
      if (std::abs(sum - 1.0) > 1e-12) return false;
    }
  }
  return true;
}

bool blur_conserves_mass() {
  Tensor img({21, 21});
  img(10, 10) = 1.0;
  const Tensor blurred = gaussian_blur(img, 2.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < blurred.size(); ++i) sum += blurred[i];
  return std::abs(sum - 1.0) < 1e-9;
}

bool bicubic_constant_and_identity() {
  const Tensor constant({4, 4}, 3.0);
  const Tensor up = bicubic_resize(constant, 8, 8);
  for (std::size_t i = 0; i < up.size(); ++i)
    if (std::abs(up[i] - 3.0) > 1e-12) return false;
  Rng rng(5);
  Tensor m({5, 7});
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = rng.normal();
  const Tensor same = bicubic_resize(m, 5, 7);
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i] != same[i]) return false;
  return true;
}

bool trapezoid_matches_riemann() {
  const Curve curve{{0.0, 0.5, 1.0}, {0.0, 1.0, 0.0}};
  const double auc = trapezoid_auc(curve);
  double riemann = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) / n;
    const double y = x <= 0.5 ? 2.0 * x : 2.0 * (1.0 - x);
    riemann += y / n;
  }
  return std::abs(auc - riemann) < 1e-6;
}

bool minmax_bounds() {
  Rng rng(17);
  Tensor m({6, 6});
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = rng.normal();
  const Tensor norm = minmax_normalize(m);
  double lo = 1.0, hi = 0.0;
  for (std::size_t i = 0; i < norm.size(); ++i) {
    lo = std::min(lo, norm[i]);
    hi = std::max(hi, norm[i]);
  }
  return lo == 0.0 && hi == 1.0;
}

bool cnn_gradient_matches_fd() {
  const auto model = build_tiny_cnn(21);
  Rng rng(22);
  Tensor x({3, 16, 16});
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform();
  const ForwardTrace trace = model->forward(x);
  const Tensor grad = model->grad_wrt_layer(1, trace.reps[1], 2, &trace);
  const Tensor fd = finite_diff_grad(*model, 1, trace.reps[1], 2, 1e-5, &trace);
  return max_rel_error(grad, fd) <= 1e-5;
}

bool attention_gradient_matches_fd() {
  const auto model = build_tiny_attention(31);
  Rng rng(32);
  Tensor x({3, 12, 12});
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform();
  const ForwardTrace trace = model->forward(x);
  const Tensor grad = model->grad_wrt_layer(2, trace.reps[2], 1, &trace);
  const Tensor fd = finite_diff_grad(*model, 2, trace.reps[2], 1, 1e-5, &trace);
  return max_rel_error(grad, fd) <= 1e-5;
}

bool forward_from_is_consistent() {
  const auto cnn = build_tiny_cnn(41);
  const auto vit = build_tiny_attention(42);
  Rng rng(43);
  for (const DifferentiableModel* model :
       {static_cast<const DifferentiableModel*>(cnn.get()),
        static_cast<const DifferentiableModel*>(vit.get())}) {
    Tensor x(model->input_shape());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform();
    const ForwardTrace trace = model->forward(x);
    for (std::size_t layer = 0; layer <= model->layer_count(); ++layer) {
      const auto logits =
          model->forward_from(layer, trace.reps[layer], &trace);
      for (std::size_t c = 0; c < logits.size(); ++c)
        if (std::abs(logits[c] - trace.logits[c]) > 1e-12) return false;
    }
  }
  return true;
}

bool zero_path_maps_are_zero() {
  const auto cnn = build_tiny_cnn(51);
  Rng rng(52);
  Tensor x({3, 16, 16});
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform();

  const ExplanationMap ig = integrated_gradients(*cnn, x, x, 0, 8);
  for (std::size_t i = 0; i < ig.raw.size(); ++i)
    if (ig.raw[i] != 0.0) return false;

  const ForwardTrace trace = cnn->forward(x);
  BaselineDraw draw;
  draw.kind = BaselineType::kConstant;
  draw.tensor = trace.reps[2];
  const ExplanationMap act = bee_map_cnn(*cnn, 2, x, draw, 0, 8);
  for (std::size_t i = 0; i < act.map.size(); ++i)
    if (act.map[i] != 0.0) return false;

  TinyAttention::Config one_block;
  one_block.blocks = 1;
  const TinyAttention vit(53, one_block);
  Tensor xv({3, 12, 12});
  for (std::size_t i = 0; i < xv.size(); ++i) xv[i] = rng.uniform();
  const ForwardTrace vtrace = vit.forward(xv);
  BaselineDraw vdraw;
  vdraw.kind = BaselineType::kConstant;
  vdraw.tensor = vtrace.reps[1];
  const ExplanationMap vmap = bee_map_vit(vit, 1, xv, vdraw, 0, 4);
  for (std::size_t i = 0; i < vmap.map.size(); ++i)
    if (vmap.map[i] != 0.0) return false;
  return true;
}

bool select_best_is_argmax() {
  MapPool pool;
  for (int i = 0; i < 3; ++i) {
    ExplanationMap m;
    m.map = Tensor({2, 2}, i);
    pool.maps.push_back(m);
  }
  const ExplanationMap hi =
      select_best(pool, {0.2, 0.9, 0.5}, Direction::kHigherBetter);
  const ExplanationMap lo =
      select_best(pool, {0.2, 0.9, 0.5}, Direction::kLowerBetter);
  const ExplanationMap tie =
      select_best(pool, {0.4, 0.4, 0.4}, Direction::kHigherBetter);
  return hi.map(0, 0) == 1.0 && lo.map(0, 0) == 0.0 && tie.map(0, 0) == 0.0;
}

bool precision_update_is_exact_and_monotone() {
  ArmState arm{{0.0, 0.0}, {1.0, 1.0}};
  precision_update(arm, {1.0, 2.0});
  if (std::abs(arm.q[0] - 1.25) > 1e-15 || std::abs(arm.q[1] - 2.0) > 1e-15)
    return false;
  Rng rng(61);
  for (int step = 0; step < 100; ++step) {
    const std::vector<double> before = arm.q;
    precision_update(arm, {rng.normal(), rng.normal()});
    if (arm.q[0] < before[0] || arm.q[1] < before[1]) return false;
  }
  return true;
}

bool snapshot_round_trips() {
  Snapshot snapshot;
  snapshot.model_seed = 99;
  snapshot.theta = {0.25, -1.5, 3e-7};
  BanditState state = init_state(MetricId::kIns, 3);
  state.history = {0.5, 0.25};
  state.arms[1].g = {0.1, -0.2, 0.3};
  snapshot.states.emplace(MetricId::kIns, state);
  const std::string once = snapshot_to_string(snapshot);
  const std::string twice = snapshot_to_string(snapshot_from_string(once));
  return once == twice;
}

bool reward_rank_is_bounded() {
  Rng rng(71);
  std::vector<double> history;
  const Reward first = extract_reward(MetricKind::kContinuous,
                                      Direction::kHigherBetter, 0.3, history, rng);
  if (first.h != 0.5) return false;
  for (int i = 0; i < 100; ++i) {
    const Reward r =
        extract_reward(MetricKind::kContinuous, Direction::kHigherBetter,
                       rng.uniform(), history, rng);
    if (r.h < 0.0 || r.h > 1.0) return false;
    if (r.y != 1 && r.y != -1) return false;
  }
  return history.size() == 101;
}

}  // namespace

int run_selftest(std::ostream& out) {
  const Check checks[] = {
      {"softmax rows sum to one", softmax_rows_sum_to_one},
      {"gaussian blur conserves interior mass", blur_conserves_mass},
      {"bicubic resize: constant invariance and identity", bicubic_constant_and_identity},
      {"trapezoid AUC matches Riemann oracle", trapezoid_matches_riemann},
      {"minmax normalize hits [0, 1]", minmax_bounds},
      {"cnn gradient matches finite differences", cnn_gradient_matches_fd},
      {"attention gradient matches finite differences", attention_gradient_matches_fd},
      {"forward_from is consistent with forward", forward_from_is_consistent},
      {"zero-path maps are all-zero", zero_path_maps_are_zero},
      {"select_best is a direction-adjusted argmax", select_best_is_argmax},
      {"precision update is exact and monotone", precision_update_is_exact_and_monotone},
      {"snapshot round-trips byte-identically", snapshot_round_trips},
      {"normalized-rank reward stays in [0, 1]", reward_rank_is_bounded},
  };

  int failures = 0;
  for (const Check& check : checks) {
    bool ok = false;
    try {
      ok = check.run();
    } catch (const std::exception& e) {
      out << "[FAIL] " << check.name << " (exception: " << e.what() << ")\n";
      ++failures;
      continue;
    }
    if (ok) {
      out << "[PASS] " << check.name << "\n";
    } else {
      out << "[FAIL] " << check.name << "\n";
      ++failures;
    }
  }
  return failures;
}

}  // namespace bee
