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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "bee/attribution.hpp"
#include "bee/bandit.hpp"
#include "bee/cli.hpp"
#include "bee/dataset.hpp"
#include "bee/harness.hpp"
#include "bee/io.hpp"
#include "bee/metrics.hpp"
#include "bee/snapshot.hpp"
#include "bee/tiny_attention.hpp"
#include "bee/tiny_cnn.hpp"
#include "support.hpp"

namespace bee {
namespace {

namespace fs = std::filesystem;

struct Criterion {
  int number;
  const char* description;
  std::function<bool(std::string&)> run;
};

// ---------------------------------------------------------------------------
// 1. Gradient correctness: reverse-mode vs central finite differences at 20
//    seeded points across both models and all exposed layers.
bool gradient_correctness(std::string& detail) {
  Rng rng(20260810);
  double worst = 0.0;
  std::size_t points = 0;
  const auto cnn = build_tiny_cnn(101);
  const auto vit = build_tiny_attention(102);
  const std::size_t per_layer[3] = {4, 3, 3};
  for (int which = 0; which < 2; ++which) {
    const DifferentiableModel& model =
        which == 0 ? static_cast<const DifferentiableModel&>(*cnn)
                   : static_cast<const DifferentiableModel&>(*vit);
    for (std::size_t layer = 0; layer <= model.layer_count(); ++layer) {
      for (std::size_t p = 0; p < per_layer[layer]; ++p) {
        const Tensor x = test::random_tensor(model.input_shape(), rng);
        const ForwardTrace trace = model.forward(x);
        Tensor rep = trace.reps[layer];
        if (p % 2 == 1)
          for (std::size_t i = 0; i < rep.size(); ++i)
            rep[i] += 0.05 * rng.normal();
        const std::size_t target = rng.index(model.class_count());
        const Tensor grad = model.grad_wrt_layer(layer, rep, target, &trace);
        const Tensor fd =
            finite_diff_grad(model, layer, rep, target, 1e-5, &trace);
        worst = std::max(worst, test::max_rel_error(grad, fd));
        ++points;
      }
    }
  }
  std::ostringstream os;
  os << points << " points, max relative error " << worst;
  detail = os.str();
  return points == 20 && worst <= 1e-5;
}

// ---------------------------------------------------------------------------
// 2. Completeness: raw attribution sums converge to f_y(x) - f_y(b) with
//    strictly shrinking error as n doubles from 32 to 512.
bool ig_completeness(std::string& detail) {
  const auto model = build_tiny_cnn(derive_seed(7, 1));
  const Dataset data = synth_dataset(7, 2, Split::kTest, {3, 16, 16}, 4);
  const Tensor& x = data.items[0].input;
  const std::size_t y = data.items[0].label;
  const Tensor black({3, 16, 16}, 0.0);
  const double delta =
      model->forward(x).logits[y] - model->forward(black).logits[y];
  if (std::abs(delta) < 1e-3) {
    detail = "degenerate logit difference";
    return false;
  }
  double prev = 1e18;
  bool shrinking = true;
  double final_err = 0.0;
  for (std::size_t n : {32ul, 64ul, 128ul, 256ul, 512ul}) {
    const ExplanationMap map = integrated_gradients(*model, x, black, y, n);
    const double err = std::abs(map.raw_sum() - delta) / std::abs(delta);
    if (err >= prev) shrinking = false;
    prev = err;
    final_err = err;
  }
  std::ostringstream os;
  os << "relative error at n=512: " << final_err
     << (shrinking ? ", strictly shrinking" : ", NOT shrinking");
  detail = os.str();
  return shrinking && final_err <= 1e-3;
}

// ---------------------------------------------------------------------------
// 3. Zero-path: every map constructor returns the all-zero map when the
//    baseline equals the representation (exact).
bool zero_path(std::string& detail) {
  Rng rng(3);
  const auto cnn = build_tiny_cnn(31);
  const Tensor x = test::random_tensor({3, 16, 16}, rng);
  const ExplanationMap ig = integrated_gradients(*cnn, x, x, 0, 8);

  const ForwardTrace trace = cnn->forward(x);
  BaselineDraw cnn_draw;
  cnn_draw.kind = BaselineType::kConstant;
  cnn_draw.tensor = trace.reps[2];
  const ExplanationMap act = bee_map_cnn(*cnn, 2, x, cnn_draw, 1, 8);

  TinyAttention::Config one_block;
  one_block.blocks = 1;
  const TinyAttention vit(32, one_block);
  const Tensor xv = test::random_tensor(vit.input_shape(), rng);
  const ForwardTrace vtrace = vit.forward(xv);
  BaselineDraw vit_draw;
  vit_draw.kind = BaselineType::kConstant;
  vit_draw.tensor = vtrace.reps[1];
  const ExplanationMap vm = bee_map_vit(vit, 1, xv, vit_draw, 0, 4);

  auto all_zero = [](const Tensor& t) {
    return std::all_of(t.values().begin(), t.values().end(),
                       [](double v) { return v == 0.0; });
  };
  const bool ok = all_zero(ig.raw) && all_zero(ig.map) && all_zero(act.raw) &&
                  all_zero(act.map) && all_zero(vm.raw) && all_zero(vm.map);
  detail = ok ? "all three constructors returned exactly zero maps"
              : "a constructor returned a non-zero map";
  return ok;
}

// ---------------------------------------------------------------------------
// 4. Bandit analytics: the exact Laplace increment and the scalar MAP fixed
//    point.
bool bandit_analytics(std::string& detail) {
  ArmState arm{{0.0, 0.0}, {1.0, 1.0}};
  precision_update(arm, {1.0, 2.0});
  const bool exact_q = arm.q[0] == 1.25 && arm.q[1] == 2.0;

  // Bisection root of sigmoid(-u) = u.
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (sigmoid(-mid) - mid > 0.0 ? lo : hi) = mid;
  }
  const double root = 0.5 * (lo + hi);

  ArmState scalar{{0.0}, {1.0}};
  MapUpdateOptions options;
  options.max_steps = 200000;
  options.grad_tol = 1e-10;
  map_update_fixed_context(scalar, {1.0}, 1, options);
  const double gap = std::abs(scalar.g[0] - root);

  std::ostringstream os;
  os << "q = (" << arm.q[0] << ", " << arm.q[1] << "), |u* - root| = " << gap
     << " (root " << root << ")";
  detail = os.str();
  return exact_q && gap <= 1e-4;
}

// ---------------------------------------------------------------------------
// 5. Bandit convergence on the two-arm Bernoulli problem.
bool bandit_convergence(std::string& detail) {
  const std::vector<double> context{1.0, -0.5, 0.8, 0.3};
  double total = 0.0;
  const int seeds = 20;
  for (int seed = 0; seed < seeds; ++seed) {
    Rng rng(4000 + seed);
    std::vector<ArmState> arms(
        2, ArmState{std::vector<double>(4, 0.0), std::vector<double>(4, 1.0)});
    std::size_t best_picks = 0;
    for (int t = 0; t < 1000; ++t) {
      const std::size_t pick = thompson_select_arms(arms, context, rng);
      const double p = pick == 0 ? 0.9 : 0.1;
      const int reward = rng.uniform() < p ? 1 : -1;
      map_update_fixed_context(arms[pick], context, reward);
      precision_update(arms[pick], context);
      if (t >= 900 && pick == 0) ++best_picks;
    }
    total += static_cast<double>(best_picks) / 100.0;
  }
  const double mean = total / seeds;
  std::ostringstream os;
  os << "best-arm frequency over iterations 900-1000: " << mean
     << " (20 seeds)";
  detail = os.str();
  return mean > 0.85;
}

// ---------------------------------------------------------------------------
// 6. Metric oracle equivalence: the influence ordering is optimal over all
//    24 pixel orderings of the 4-pixel linear model.
bool metric_oracle(std::string& detail) {
  const test::LinearToyModel model = test::LinearToyModel::default_model();
  const Tensor x({1, 2, 2}, 1.0);
  const Tensor best({2, 2}, {3.0, 2.0, 1.0, 0.0});

  std::vector<std::size_t> perm{0, 1, 2, 3};
  std::vector<Tensor> orderings;
  do {
    Tensor map({2, 2});
    for (std::size_t i = 0; i < 4; ++i)
      map[perm[i]] = static_cast<double>(3 - i);
    orderings.push_back(map);
  } while (std::next_permutation(perm.begin(), perm.end()));

  for (MetricId id : {MetricId::kPos, MetricId::kDel, MetricId::kNeg,
                      MetricId::kIns}) {
    const double best_value = evaluate_metric_instance(id, model, x, 0, best);
    const bool lower = metric_direction(id) == Direction::kLowerBetter;
    for (const Tensor& map : orderings) {
      const double value = evaluate_metric_instance(id, model, x, 0, map);
      if (lower ? best_value > value + 1e-12 : best_value < value - 1e-12) {
        detail = std::string("an ordering beats the ground truth on ") +
                 to_string(id);
        return false;
      }
    }
  }
  detail = "influence ordering optimal on POS/DEL/NEG/INS over 24 orderings";
  return true;
}

// ---------------------------------------------------------------------------
// 7. Selection: the returned map's score equals the direction-adjusted pool
//    maximum in 100 randomized pretrained-mode runs.
bool selection_optimality(std::string& detail) {
  RunConfig config;
  config.metrics = {"DEL", "INS"};
  config.trials = 4;
  config.steps = 2;
  config.train_items = 4;
  config.test_items = 5;
  config.traindata_pool = 3;
  config.traindata_avg = 2;
  const ExperimentSetup setup = make_setup(config);
  Rng rng(7007);
  std::size_t runs = 0;
  for (MetricId metric : {MetricId::kDel, MetricId::kIns}) {
    const BanditState state = init_state(metric, config.context_dim);
    const Direction dir = metric_direction(metric);
    for (int run = 0; run < 50; ++run) {
      const DatasetItem& item = setup.test.items[run % setup.test.items.size()];
      const ExplainResult result =
          explain_pbee(setup, state, item.input, item.label, 4, rng);
      double best = result.scores[0];
      for (double s : result.scores)
        if (dir == Direction::kHigherBetter ? s > best : s < best) best = s;
      if (!result.best.score || *result.best.score != best) {
        detail = "returned score differs from the pool optimum";
        return false;
      }
      ++runs;
    }
  }
  std::ostringstream os;
  os << runs << " randomized runs returned the exact pool optimum";
  detail = os.str();
  return runs == 100;
}

// ---------------------------------------------------------------------------
// 8. Convergence-curve analog: with one dominating baseline type, the
//    finetuned strategy reaches 95% of the dominating single-type plateau in
//    at most half the iterations the non-adaptive strategy needs.
bool convergence_dominance(std::string& detail) {
  const BaselineType winner = BaselineType::kNormal;
  const std::size_t iterations = 40;
  const int seeds = 20;
  std::vector<double> fbee_mean(iterations, 0.0);
  std::vector<double> nbee_mean(iterations, 0.0);
  std::vector<double> single_mean(iterations, 0.0);
  double reward_gap_sum = 0.0;

  for (int seed = 0; seed < seeds; ++seed) {
    RunConfig config;
    config.metric = "INS";  // higher-better
    config.metrics = {"INS"};
    config.trials = 4;
    config.steps = 2;
    config.seed = 8800 + seed;
    config.train_items = 48;
    config.test_items = 4;
    config.epochs = 6;
    config.traindata_pool = 4;
    config.traindata_avg = 2;
    ExperimentSetup setup = make_setup(config);

    auto rig_rng = std::make_shared<Rng>(9100 + seed);
    const ScoreFn rig = [winner, rig_rng](const ExplanationMap& map,
                                          const Tensor&, std::size_t) {
      const bool won = map.draw && map.draw->kind == winner;
      return won ? 0.85 + 0.15 * rig_rng->uniform()
                 : 0.15 * rig_rng->uniform();
    };

    // Setup sanity: mean reward gap between the winner and the rest under
    // uniform type selection.
    {
      Rng sim(9200 + seed);
      std::vector<double> history;
      double winner_reward = 0.0, other_reward = 0.0;
      std::size_t winner_n = 0, other_n = 0;
      for (int t = 0; t < 2000; ++t) {
        const bool is_winner = sim.index(kBaselineTypeCount) == 0;
        const double score =
            is_winner ? 0.85 + 0.15 * sim.uniform() : 0.15 * sim.uniform();
        const Reward r =
            extract_reward(MetricKind::kContinuous, Direction::kHigherBetter,
                           score, history, sim);
        if (is_winner) {
          winner_reward += r.y;
          ++winner_n;
        } else {
          other_reward += r.y;
          ++other_n;
        }
      }
      reward_gap_sum += winner_reward / winner_n - other_reward / other_n;
    }

    PretrainOptions options;
    options.score_override = rig;
    const PretrainResult trained = pretrain(setup, options);

    const CurveTable table = convergence_experiment(
        setup, trained.states, {"fbee", "nbee", "single:Normal"}, iterations,
        rig);
    for (std::size_t t = 0; t < iterations; ++t) {
      fbee_mean[t] += table.curves[0][t] / seeds;
      nbee_mean[t] += table.curves[1][t] / seeds;
      single_mean[t] += table.curves[2][t] / seeds;
    }
  }

  const double reward_gap = reward_gap_sum / seeds;
  const double plateau = single_mean.back();
  const double bar = 0.95 * plateau;
  auto first_reaching = [&](const std::vector<double>& curve) {
    for (std::size_t t = 0; t < curve.size(); ++t)
      if (curve[t] >= bar) return t + 1;
    return curve.size() + 1;
  };
  const std::size_t t_fbee = first_reaching(fbee_mean);
  const std::size_t t_nbee = first_reaching(nbee_mean);

  std::ostringstream os;
  os << "reward gap " << reward_gap << ", plateau " << plateau
     << ", t95 fbee/nbee = " << t_fbee << "/" << t_nbee;
  detail = os.str();
  return reward_gap >= 0.6 && t_nbee <= iterations + 1 && 2 * t_fbee <= t_nbee;
}

// ---------------------------------------------------------------------------
// 9. Win-rate table: rows normalize to one, and the dominating type wins
//    more than half the pretrained-mode selections on the rigged setup.
bool win_rates(std::string& detail) {
  const BaselineType winner = BaselineType::kUniform;
  RunConfig config;
  config.metric = "INS";
  config.metrics = {"INS"};
  config.trials = 8;
  config.steps = 2;
  config.seed = 9900;
  config.train_items = 32;
  config.test_items = 30;
  config.epochs = 8;
  config.traindata_pool = 4;
  config.traindata_avg = 2;
  ExperimentSetup setup = make_setup(config);

  auto rig_rng = std::make_shared<Rng>(12345);
  const ScoreFn rig = [winner, rig_rng](const ExplanationMap& map,
                                        const Tensor&, std::size_t) {
    const bool won = map.draw && map.draw->kind == winner;
    return won ? 0.85 + 0.15 * rig_rng->uniform() : 0.15 * rig_rng->uniform();
  };
  PretrainOptions options;
  options.score_override = rig;
  const PretrainResult trained = pretrain(setup, options);
  const BanditState& state = trained.states.at(MetricId::kIns);

  std::vector<SelectionEvent> events;
  Rng rng(777);
  for (const DatasetItem& item : setup.test.items) {
    const ExplainResult result = explain_pbee(
        setup, state, item.input, item.label, config.trials, rng, rig);
    events.push_back({MetricId::kIns, result.best.draw->kind});
  }
  const auto table = win_rate_table(events);
  double sum = 0.0;
  for (double v : table.at(MetricId::kIns)) sum += v;
  const double winner_rate =
      table.at(MetricId::kIns)[static_cast<std::size_t>(winner)];

  std::ostringstream os;
  os << "row sum " << sum << ", dominating-type win rate " << winner_rate;
  detail = os.str();
  return std::abs(sum - 1.0) <= 1e-12 && winner_rate > 0.5;
}

// ---------------------------------------------------------------------------
// 10. Weakly monotonic finetuned logs over 100 runs (exact comparisons).
bool monotonic_fbee(std::string& detail) {
  RunConfig config;
  config.metrics = {"DEL"};
  config.trials = 6;
  config.steps = 2;
  config.train_items = 4;
  config.test_items = 10;
  config.traindata_pool = 3;
  config.traindata_avg = 2;
  const ExperimentSetup setup = make_setup(config);
  const BanditState state = init_state(MetricId::kDel, config.context_dim);
  std::size_t runs = 0;
  for (int repeat = 0; repeat < 10; ++repeat) {
    for (const DatasetItem& item : setup.test.items) {
      Rng rng(derive_seed(31337, 100 * repeat + runs));
      const ExplainResult result = explain_fbee(setup, state, item.input,
                                                item.label, config.trials, rng);
      for (std::size_t t = 1; t < result.trials.size(); ++t) {
        // DEL is lower-better: the running best never increases.
        if (result.trials[t].best_so_far > result.trials[t - 1].best_so_far) {
          detail = "a best-so-far sequence increased";
          return false;
        }
      }
      ++runs;
    }
  }
  std::ostringstream os;
  os << runs << " finetuned runs, every best-so-far sequence weakly monotonic";
  detail = os.str();
  return runs == 100;
}

// ---------------------------------------------------------------------------
// 11. Persistence: byte-identical snapshot round trip and replay-equivalent
//     selections.
bool persistence(std::string& detail) {
  RunConfig config;
  config.metrics = {"DEL", "PIC"};
  config.trials = 2;
  config.steps = 2;
  config.train_items = 8;
  config.test_items = 2;
  config.epochs = 2;
  config.traindata_pool = 3;
  config.traindata_avg = 2;
  ExperimentSetup setup = make_setup(config);
  const PretrainResult trained = pretrain(setup);

  Snapshot snapshot;
  snapshot.model_seed = setup.model_seed;
  snapshot.theta = setup.context.params();
  snapshot.states = trained.states;

  const std::string once = snapshot_to_string(snapshot);
  const Snapshot loaded = snapshot_from_string(once);
  const std::string twice = snapshot_to_string(loaded);
  if (once != twice) {
    detail = "round trip changed bytes";
    return false;
  }

  const auto context = setup.context.embed(setup.test.items[0].input);
  Rng ra(5150), rb(5150);
  const BanditState& orig = trained.states.at(MetricId::kDel);
  const BanditState& back = loaded.states.at(MetricId::kDel);
  for (int i = 0; i < 100; ++i) {
    if (thompson_select(orig, context, ra) !=
        thompson_select(back, context, rb)) {
      detail = "replayed selections diverged";
      return false;
    }
  }
  detail = "byte-identical round trip; 100 replayed selections identical";
  return true;
}

// ---------------------------------------------------------------------------
// 12. End-to-end determinism of the eval subcommand.
bool e2e_determinism(std::string& detail) {
  const fs::path dir = fs::temp_directory_path() / "bee_acceptance_e2e";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg_path = dir / "cfg.json";
  write_text_file(cfg_path, R"({
  "model": "tiny_cnn",
  "metric": "DEL",
  "trials": 2,
  "steps": 2,
  "seed": 7,
  "train_items": 6,
  "test_items": 2,
  "epochs": 1,
  "traindata_pool": 3,
  "traindata_avg": 2
})");
  const std::string cfg = cfg_path.string();
  if (run_cli({"pretrain", "-c", cfg, "-o", (dir / "pre").string()}) != 0) {
    detail = "pretrain subcommand failed";
    return false;
  }
  const std::string snapshot = (dir / "pre" / "snapshot.json").string();
  for (const char* out : {"a", "b"}) {
    if (run_cli({"eval", "-c", cfg, "-s", snapshot, "-o", (dir / out).string(),
                 "--methods", "ig,pbee,nbee"}) != 0) {
      detail = "eval subcommand failed";
      return false;
    }
  }
  const std::string a = read_text_file(dir / "a" / "results.csv");
  const std::string b = read_text_file(dir / "b" / "results.csv");
  fs::remove_all(dir);
  detail = a == b ? "two eval runs produced byte-identical CSVs"
                  : "eval CSVs differ between runs";
  return a == b;
}

}  // namespace
}  // namespace bee

int main() {
  using bee::Criterion;
  const std::vector<Criterion> criteria = {
      {1, "gradient correctness vs finite differences",
       bee::gradient_correctness},
      {2, "path-integration completeness", bee::ig_completeness},
      {3, "zero-path maps are exactly zero", bee::zero_path},
      {4, "bandit analytic updates", bee::bandit_analytics},
      {5, "bandit convergence on the 2-arm Bernoulli problem",
       bee::bandit_convergence},
      {6, "metric ordering oracle (24 orderings)", bee::metric_oracle},
      {7, "selection returns the pool optimum", bee::selection_optimality},
      {8, "finetuned convergence dominates non-adaptive sampling",
       bee::convergence_dominance},
      {9, "win rates normalize and favor the dominating type", bee::win_rates},
      {10, "finetuned logs are weakly monotonic", bee::monotonic_fbee},
      {11, "snapshot persistence and replay", bee::persistence},
      {12, "end-to-end eval determinism", bee::e2e_determinism},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] criterion %2d: %s -- %s (%.1fs)\n", ok ? "PASS" : "FAIL",
                criterion.number, criterion.description, detail.c_str(),
                seconds);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures > 0)
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  else
    std::printf("all %zu criteria passed\n", criteria.size());
  return failures == 0 ? 0 : 1;
}
