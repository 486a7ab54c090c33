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
#include "bee/bandit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bee {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// log(1 + exp(a)) without overflow.
double softplus(double a) {
  return std::max(a, 0.0) + std::log1p(std::exp(-std::abs(a)));
}

}  // namespace

double sigmoid(double a) { return 1.0 / (1.0 + std::exp(-a)); }

BanditState init_state(MetricId metric, std::size_t context_dim) {
  BanditState state;
  state.metric = metric;
  state.arms.assign(kBaselineTypeCount,
                    ArmState{std::vector<double>(context_dim, 0.0),
                             std::vector<double>(context_dim, 1.0)});
  return state;
}

std::size_t thompson_select_arms(const std::vector<ArmState>& arms,
                                 const std::vector<double>& context, Rng& rng) {
  if (arms.empty())
    throw std::invalid_argument("thompson_select_arms: no arms");
  std::size_t best = 0;
  double best_score = -1.0;
  for (std::size_t a = 0; a < arms.size(); ++a) {
    const ArmState& arm = arms[a];
    double z = 0.0;
    for (std::size_t i = 0; i < context.size(); ++i) {
      const double w = arm.g[i] + rng.normal() / std::sqrt(arm.q[i]);
      z += context[i] * w;
    }
    const double score = sigmoid(z);
    if (score > best_score) {
      best_score = score;
      best = a;
    }
  }
  return best;
}

BaselineType thompson_select(const BanditState& state,
                             const std::vector<double>& context, Rng& rng) {
  return kAllBaselineTypes[thompson_select_arms(state.arms, context, rng)];
}

MetricKind metric_kind(MetricId id) {
  return metric_is_binary(id) ? MetricKind::kBinary : MetricKind::kContinuous;
}

Reward extract_reward(MetricKind kind, Direction direction, double score,
                      std::vector<double>& history, Rng& rng) {
  if (!std::isfinite(score))
    throw std::invalid_argument("extract_reward: score must be finite");
  Reward reward;
  if (kind == MetricKind::kBinary) {
    reward.y = score > 0.0 ? 1 : -1;
    reward.h = score > 0.0 ? 1.0 : 0.0;
    return reward;
  }
  if (history.empty()) {
    reward.h = 0.5;
  } else {
    double worse = 0.0, ties = 0.0;
    for (double prev : history) {
      const bool prev_worse = direction == Direction::kHigherBetter
                                  ? prev < score
                                  : prev > score;
      if (prev_worse)
        worse += 1.0;
      else if (prev == score)
        ties += 1.0;
    }
    reward.h = (worse + 0.5 * ties) / static_cast<double>(history.size());
  }
  history.push_back(score);
  reward.y = rng.uniform() < reward.h ? 1 : -1;
  return reward;
}

namespace {

struct Objective {
  double loss = 0.0;
  std::vector<double> grad_u;
  double grad_norm2 = 0.0;
};

Objective evaluate_u_objective(const ArmState& arm,
                               const std::vector<double>& u,
                               const std::vector<double>& context, int reward) {
  Objective obj;
  const double z = reward * dot(u, context);
  obj.loss = softplus(-z);
  const double slope = -reward * sigmoid(-z);  // d(-log sigmoid(z)) / d(u . c)
  obj.grad_u.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double prior = arm.q[i] * (u[i] - arm.g[i]);
    obj.loss += 0.5 * arm.q[i] * (u[i] - arm.g[i]) * (u[i] - arm.g[i]);
    obj.grad_u[i] = slope * context[i] + prior;
    obj.grad_norm2 += obj.grad_u[i] * obj.grad_u[i];
  }
  return obj;
}

}  // namespace

MapUpdateResult map_update_fixed_context(ArmState& arm,
                                         const std::vector<double>& context,
                                         int reward,
                                         const MapUpdateOptions& options) {
  if (reward != 1 && reward != -1)
    throw std::invalid_argument("map_update: reward must be +1 or -1");
  std::vector<double> u = arm.g;
  std::vector<double> best_u = u;
  double best_loss = evaluate_u_objective(arm, u, context, reward).loss;

  MapUpdateResult result;
  for (std::size_t step = 0; step < options.max_steps; ++step) {
    const Objective obj = evaluate_u_objective(arm, u, context, reward);
    if (obj.loss < best_loss) {
      best_loss = obj.loss;
      best_u = u;
    }
    if (std::sqrt(obj.grad_norm2) < options.grad_tol) {
      result.converged = true;
      break;
    }
    for (std::size_t i = 0; i < u.size(); ++i)
      u[i] -= options.learning_rate * obj.grad_u[i];
    result.steps = step + 1;
  }
  const Objective final_obj = evaluate_u_objective(arm, u, context, reward);
  if (final_obj.loss < best_loss) {
    best_loss = final_obj.loss;
    best_u = u;
  }
  if (std::sqrt(final_obj.grad_norm2) < options.grad_tol) result.converged = true;

  arm.g = best_u;
  result.loss = best_loss;
  return result;
}

MapUpdateResult map_update(ArmState& arm, ContextNetwork& net, const Tensor& x,
                           int reward, const MapUpdateOptions& options) {
  if (reward != 1 && reward != -1)
    throw std::invalid_argument("map_update: reward must be +1 or -1");
  std::vector<double> u = arm.g;
  std::vector<double> theta = net.params();
  std::vector<double> best_u = u;
  std::vector<double> best_theta = theta;
  double best_loss = std::numeric_limits<double>::infinity();

  MapUpdateResult result;
  for (std::size_t step = 0; step <= options.max_steps; ++step) {
    const std::vector<double> c = net.embed(x);
    const Objective obj = evaluate_u_objective(arm, u, c, reward);

    // Gradient w.r.t. theta through the context output.
    const double z = reward * dot(u, c);
    const double slope = -reward * sigmoid(-z);
    std::vector<double> dloss_dc(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) dloss_dc[i] = slope * u[i];
    const std::vector<double> grad_theta = net.param_grad(x, dloss_dc);

    double norm2 = obj.grad_norm2;
    for (double gt : grad_theta) norm2 += gt * gt;

    if (obj.loss < best_loss) {
      best_loss = obj.loss;
      best_u = u;
      best_theta = theta;
    }
    if (std::sqrt(norm2) < options.grad_tol) {
      result.converged = true;
      break;
    }
    if (step == options.max_steps) break;

    for (std::size_t i = 0; i < u.size(); ++i)
      u[i] -= options.learning_rate * obj.grad_u[i];
    for (std::size_t i = 0; i < theta.size(); ++i)
      theta[i] -= options.learning_rate * grad_theta[i];
    net.set_params(theta);
    result.steps = step + 1;
  }

  arm.g = best_u;
  net.set_params(best_theta);
  result.loss = best_loss;
  return result;
}

void precision_update(ArmState& arm, const std::vector<double>& context) {
  const double z = dot(arm.g, context);
  const double scale = sigmoid(z) * sigmoid(-z);
  for (std::size_t i = 0; i < arm.q.size(); ++i)
    arm.q[i] += scale * context[i] * context[i];
}

BetaArms init_beta_arms() {
  BetaArms arms;
  for (auto& ab : arms.counts) ab = {1.0, 1.0};
  return arms;
}

BaselineType beta_select(const BetaArms& arms, Rng& rng) {
  std::size_t best = 0;
  double best_draw = -1.0;
  for (std::size_t a = 0; a < kBaselineTypeCount; ++a) {
    const double draw = rng.beta(arms.counts[a][0], arms.counts[a][1]);
    if (draw > best_draw) {
      best_draw = draw;
      best = a;
    }
  }
  return kAllBaselineTypes[best];
}

void beta_update(BetaArms& arms, BaselineType arm, int reward) {
  if (reward != 1 && reward != -1)
    throw std::invalid_argument("beta_update: reward must be +1 or -1");
  auto& ab = arms.counts[static_cast<std::size_t>(arm)];
  if (reward == 1)
    ab[0] += 1.0;
  else
    ab[1] += 1.0;
}

BaselineType uniform_select(Rng& rng) {
  return kAllBaselineTypes[rng.index(kBaselineTypeCount)];
}

std::map<MetricId, std::array<double, kBaselineTypeCount>> win_rate_table(
    const std::vector<SelectionEvent>& events) {
  if (events.empty())
    throw std::invalid_argument("win_rate_table: empty log");
  std::map<MetricId, std::array<double, kBaselineTypeCount>> table;
  std::map<MetricId, double> totals;
  for (const SelectionEvent& e : events) {
    auto [it, inserted] = table.try_emplace(e.metric);
    if (inserted) it->second.fill(0.0);
    it->second[static_cast<std::size_t>(e.winner)] += 1.0;
    totals[e.metric] += 1.0;
  }
  for (auto& [metric, row] : table)
    for (double& v : row) v /= totals[metric];
  return table;
}

std::vector<double> histogram_unit(const std::vector<double>& samples,
                                   std::size_t bins) {
  if (bins < 1)
    throw std::invalid_argument("histogram_unit: bins must be >= 1");
  if (samples.empty())
    throw std::invalid_argument("histogram_unit: no samples");
  std::vector<double> mass(bins, 0.0);
  const double weight = 1.0 / static_cast<double>(samples.size());
  for (double s : samples) {
    const auto bin = static_cast<std::size_t>(std::min(
        static_cast<double>(bins) - 1.0,
        std::max(0.0, std::floor(s * static_cast<double>(bins)))));
    mass[bin] += weight;
  }
  return mass;
}

std::vector<std::vector<double>> arm_score_samples(
    const BanditState& state, const std::vector<double>& context,
    std::size_t samples, Rng& rng) {
  if (samples < 1)
    throw std::invalid_argument("arm_score_samples: samples must be >= 1");
  std::vector<std::vector<double>> out(state.arms.size());
  for (std::size_t a = 0; a < state.arms.size(); ++a) {
    out[a].reserve(samples);
    const ArmState& arm = state.arms[a];
    for (std::size_t s = 0; s < samples; ++s) {
      double z = 0.0;
      for (std::size_t i = 0; i < context.size(); ++i)
        z += context[i] * (arm.g[i] + rng.normal() / std::sqrt(arm.q[i]));
      out[a].push_back(sigmoid(z));
    }
  }
  return out;
}

}  // namespace bee
