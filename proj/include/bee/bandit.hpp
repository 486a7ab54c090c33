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
#ifndef BEE_BANDIT_HPP_
#define BEE_BANDIT_HPP_

#include <array>
#include <map>
#include <vector>

#include "bee/attribution.hpp"
#include "bee/baselines.hpp"
#include "bee/context_network.hpp"
#include "bee/metrics.hpp"
#include "bee/rng.hpp"
#include "bee/tensor.hpp"

namespace bee {

double sigmoid(double a);

// Posterior of one arm's classifier: mean vector g and elementwise-positive
// diagonal precision q.
struct ArmState {
  std::vector<double> g;
  std::vector<double> q;
};

// Per-metric bandit: one arm per baseline type (enumeration order), plus the
// raw-score history feeding the normalized-rank reward. The context network
// (theta) is shared across metrics and owned elsewhere.
struct BanditState {
  MetricId metric = MetricId::kDel;
  std::vector<ArmState> arms;
  std::vector<double> history;
};

BanditState init_state(MetricId metric, std::size_t context_dim);

// Draws w ~ N(g, diag(1/q)) per arm and returns the index maximizing
// sigmoid(context . w); ties by lowest index.
std::size_t thompson_select_arms(const std::vector<ArmState>& arms,
                                 const std::vector<double>& context, Rng& rng);

BaselineType thompson_select(const BanditState& state,
                             const std::vector<double>& context, Rng& rng);

struct Reward {
  int y = 1;       // +1 or -1
  double h = 0.5;  // success parameter actually used
};

enum class MetricKind { kBinary, kContinuous };

MetricKind metric_kind(MetricId id);

// Binary: success (score > 0) maps to +1, failure to -1. Continuous: the
// normalized rank h of the score against the history (strictly-worse count
// plus half the ties, 0.5 on an empty history), then y ~ +1 with
// probability h; the score is appended to the history.
Reward extract_reward(MetricKind kind, Direction direction, double score,
                      std::vector<double>& history, Rng& rng);

struct MapUpdateOptions {
  double learning_rate = 1e-3;
  std::size_t max_steps = 25;
  double grad_tol = 1e-6;
};

struct MapUpdateResult {
  bool converged = false;
  double loss = 0.0;
  std::size_t steps = 0;
};

// Minimizes -log sigmoid(y * u . c) + 0.5 * sum_i q_i (u_i - g_i)^2 over u
// by gradient descent from u = g, then sets g to the solution. The context
// c is fixed (finetune mode: theta frozen).
MapUpdateResult map_update_fixed_context(ArmState& arm,
                                         const std::vector<double>& context,
                                         int reward,
                                         const MapUpdateOptions& options = {});

// Joint variant: descends the same objective over (u, theta), with the
// context recomputed from the network each step.
MapUpdateResult map_update(ArmState& arm, ContextNetwork& net, const Tensor& x,
                           int reward, const MapUpdateOptions& options = {});

// Laplace precision increment:
// q_i += sigmoid(g . c) * sigmoid(-g . c) * c_i^2.
void precision_update(ArmState& arm, const std::vector<double>& context);

// Non-contextual count-based ablation: per-arm Beta(alpha, beta) posteriors.
struct BetaArms {
  std::array<std::array<double, 2>, kBaselineTypeCount> counts;  // alpha, beta
};

BetaArms init_beta_arms();
BaselineType beta_select(const BetaArms& arms, Rng& rng);
void beta_update(BetaArms& arms, BaselineType arm, int reward);

// Non-adaptive ablation: uniform over the five types.
BaselineType uniform_select(Rng& rng);

struct SelectionEvent {
  MetricId metric = MetricId::kDel;
  BaselineType winner = BaselineType::kNormal;
};

// Per-metric normalized win counts; each row sums to 1.
std::map<MetricId, std::array<double, kBaselineTypeCount>> win_rate_table(
    const std::vector<SelectionEvent>& events);

// Monte Carlo samples of sigmoid(context . w) per arm.
std::vector<std::vector<double>> arm_score_samples(
    const BanditState& state, const std::vector<double>& context,
    std::size_t samples, Rng& rng);

// Normalized histogram over [0, 1] with equal-width bins (values clamped to
// the edge bins); bin masses sum to 1.
std::vector<double> histogram_unit(const std::vector<double>& samples,
                                   std::size_t bins);

}  // namespace bee

#endif  // BEE_BANDIT_HPP_
