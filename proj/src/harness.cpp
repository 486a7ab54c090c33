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
#include "bee/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "json.hpp"

#include "bee/io.hpp"
#include "bee/patterns.hpp"
#include "bee/tiny_attention.hpp"
#include "bee/tiny_cnn.hpp"

namespace bee {

namespace {

using nlohmann::json;

// Seed sub-streams.
constexpr std::uint64_t kModelStream = 1;
constexpr std::uint64_t kContextStream = 2;
constexpr std::uint64_t kPretrainStream = 3;
constexpr std::uint64_t kEvalStream = 4;
constexpr std::uint64_t kCurveStream = 5;

// Pretrained score history carried into a finetuning session.
constexpr std::size_t kFinetuneHistoryTail = 16;

double direction_adjusted(double score, Direction direction) {
  return direction == Direction::kHigherBetter ? score : -score;
}

void assign_field(RunConfig& config, const std::string& key,
                  const json& value) {
  auto as_count = [&](const char* what) -> std::size_t {
    if (!value.is_number_unsigned() && !value.is_number_integer())
      throw std::invalid_argument(std::string("config: ") + what +
                                  " must be a non-negative integer");
    const long long v = value.get<long long>();
    if (v < 0)
      throw std::invalid_argument(std::string("config: ") + what +
                                  " must be non-negative");
    return static_cast<std::size_t>(v);
  };
  auto as_real = [&](const char* what) -> double {
    if (!value.is_number())
      throw std::invalid_argument(std::string("config: ") + what +
                                  " must be a number");
    return value.get<double>();
  };
  auto as_string = [&](const char* what) -> std::string {
    if (!value.is_string())
      throw std::invalid_argument(std::string("config: ") + what +
                                  " must be a string");
    return value.get<std::string>();
  };

  if (key == "model") config.model = as_string("model");
  else if (key == "metric") config.metric = as_string("metric");
  else if (key == "metrics") {
    if (!value.is_array())
      throw std::invalid_argument("config: metrics must be an array of strings");
    config.metrics.clear();
    for (const auto& m : value) {
      if (!m.is_string())
        throw std::invalid_argument("config: metrics must be an array of strings");
      config.metrics.push_back(m.get<std::string>());
    }
  } else if (key == "trials") config.trials = as_count("trials");
  else if (key == "steps") config.steps = as_count("steps");
  else if (key == "layers") {
    if (!value.is_array())
      throw std::invalid_argument("config: layers must be an array of integers");
    config.layers.clear();
    for (const auto& l : value) {
      if (!l.is_number_integer() && !l.is_number_unsigned())
        throw std::invalid_argument("config: layers must be an array of integers");
      const long long v = l.get<long long>();
      if (v < 0) throw std::invalid_argument("config: layer indices must be >= 0");
      config.layers.push_back(static_cast<std::size_t>(v));
    }
  } else if (key == "strategy") config.strategy = as_string("strategy");
  else if (key == "seed") {
    if (!value.is_number_unsigned() && !value.is_number_integer())
      throw std::invalid_argument("config: seed must be an integer");
    config.seed = value.get<std::uint64_t>();
  } else if (key == "context_dim") config.context_dim = as_count("context_dim");
  else if (key == "classes") config.classes = as_count("classes");
  else if (key == "train_items") config.train_items = as_count("train_items");
  else if (key == "test_items") config.test_items = as_count("test_items");
  else if (key == "epochs") config.epochs = as_count("epochs");
  else if (key == "traindata_pool") config.traindata_pool = as_count("traindata_pool");
  else if (key == "traindata_avg") config.traindata_avg = as_count("traindata_avg");
  else if (key == "blur_sigma_max") config.blur_sigma_max = as_real("blur_sigma_max");
  else if (key == "sic_blur_sigma") config.sic_blur_sigma = as_real("sic_blur_sigma");
  else if (key == "class_ref") config.class_ref = as_string("class_ref");
  else if (key == "auc_percent") {
    if (!value.is_boolean())
      throw std::invalid_argument("config: auc_percent must be a boolean");
    config.auc_percent = value.get<bool>();
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

std::size_t pick_layer(const std::vector<std::size_t>& layers, Rng& rng) {
  return layers.size() == 1 ? layers[0] : layers[rng.index(layers.size())];
}

const std::vector<Tensor>* pool_for_layer(const ExperimentSetup& setup,
                                          std::size_t layer) {
  const auto it = setup.pools.find(layer);
  return it == setup.pools.end() ? nullptr : &it->second;
}

const BanditState& state_for(const std::map<MetricId, BanditState>& states,
                             MetricId metric, const char* who) {
  const auto it = states.find(metric);
  if (it == states.end())
    throw std::invalid_argument(std::string(who) +
                                ": no pretrained state for metric " +
                                to_string(metric));
  return it->second;
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: parse error: ") + e.what());
  }
  if (!root.is_object())
    throw std::invalid_argument("config: top level must be an object");
  RunConfig config;
  for (const auto& [key, value] : root.items())
    assign_field(config, key, value);
  config.validate();
  return config;
}

std::string RunConfig::to_json_text() const {
  json root;  // std::map-backed: keys serialize sorted
  root["model"] = model;
  root["metric"] = metric;
  root["metrics"] = metrics;
  root["trials"] = trials;
  root["steps"] = steps;
  root["layers"] = layers;
  root["strategy"] = strategy;
  root["seed"] = seed;
  root["context_dim"] = context_dim;
  root["classes"] = classes;
  root["train_items"] = train_items;
  root["test_items"] = test_items;
  root["epochs"] = epochs;
  root["traindata_pool"] = traindata_pool;
  root["traindata_avg"] = traindata_avg;
  root["blur_sigma_max"] = blur_sigma_max;
  root["sic_blur_sigma"] = sic_blur_sigma;
  root["class_ref"] = class_ref;
  root["auc_percent"] = auc_percent;
  return root.dump(2) + "\n";
}

void RunConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::invalid_argument("override must be key=value: '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;  // plain string
  assign_field(*this, key, value);
}

void RunConfig::validate() const {
  if (model != "tiny_cnn" && model != "tiny_attention")
    throw std::invalid_argument("config: model must be tiny_cnn or tiny_attention");
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (steps < 1) throw std::invalid_argument("config: steps must be >= 1");
  if (context_dim < 1)
    throw std::invalid_argument("config: context_dim must be >= 1");
  if (classes < 2 || classes > kMaxPatternClasses)
    throw std::invalid_argument("config: classes must be in [2, 8]");
  if (train_items < 1 || test_items < 1)
    throw std::invalid_argument("config: dataset sizes must be >= 1");
  if (traindata_pool < 1 || traindata_avg < 1)
    throw std::invalid_argument("config: TrainData pool/average must be >= 1");
  if (blur_sigma_max < 0.0)
    throw std::invalid_argument("config: blur_sigma_max must be >= 0");
  if (sic_blur_sigma <= 0.0)
    throw std::invalid_argument("config: sic_blur_sigma must be > 0");
  if (class_ref != "target" && class_ref != "predicted")
    throw std::invalid_argument("config: class_ref must be target or predicted");
  // Both reference models expose layers 0..2.
  for (std::size_t layer : layers)
    if (layer > 2)
      throw std::invalid_argument("config: layer index out of model range");
  if (!metric_from_string(metric))
    throw std::invalid_argument("config: unknown metric '" + metric + "'");
  for (const std::string& m : metrics)
    if (!metric_from_string(m))
      throw std::invalid_argument("config: unknown metric '" + m + "'");
  parse_strategy(strategy);
}

std::vector<MetricId> RunConfig::metric_set() const {
  // The bandit runs per metric; by default every metric gets its own state.
  if (metrics.empty())
    return std::vector<MetricId>(kAllMetrics.begin(), kAllMetrics.end());
  std::vector<MetricId> ids;
  for (const std::string& name : metrics) {
    const auto id = metric_from_string(name);
    if (!id) throw std::invalid_argument("config: unknown metric '" + name + "'");
    if (std::find(ids.begin(), ids.end(), *id) == ids.end()) ids.push_back(*id);
  }
  return ids;
}

StrategySpec parse_strategy(const std::string& text) {
  StrategySpec spec;
  spec.name = text;
  if (text == "fbee") spec.kind = StrategyKind::kFbee;
  else if (text == "pbee") spec.kind = StrategyKind::kPbee;
  else if (text == "nbee") spec.kind = StrategyKind::kNbee;
  else if (text == "ncbee") spec.kind = StrategyKind::kNcbee;
  else if (text.rfind("single:", 0) == 0) {
    spec.kind = StrategyKind::kSingle;
    const auto type = baseline_type_from_string(text.substr(7));
    if (!type)
      throw std::invalid_argument("unknown baseline type in strategy '" + text + "'");
    spec.single_type = *type;
  } else {
    throw std::invalid_argument("unknown strategy '" + text + "'");
  }
  return spec;
}

ExperimentSetup make_setup(const RunConfig& config) {
  config.validate();
  ExperimentSetup setup;
  setup.config = config;
  setup.model_seed = derive_seed(config.seed, kModelStream);

  if (config.model == "tiny_cnn") {
    TinyCnn::Config mc;
    mc.classes = config.classes;
    setup.model = build_tiny_cnn(setup.model_seed, mc);
  } else {
    TinyAttention::Config mc;
    mc.classes = config.classes;
    auto model = build_tiny_attention(setup.model_seed, mc);
    setup.attention = model.get();
    setup.model = std::move(model);
  }

  setup.context = ContextNetwork(setup.model->input_shape(), config.context_dim,
                                 derive_seed(config.seed, kContextStream));
  setup.train = synth_dataset(config.seed, config.train_items, Split::kTrain,
                              setup.model->input_shape(), config.classes);
  setup.test = synth_dataset(config.seed, config.test_items, Split::kTest,
                             setup.model->input_shape(), config.classes);

  setup.layers = config.layers.empty()
                     ? std::vector<std::size_t>{setup.model->layer_count()}
                     : config.layers;

  setup.metric_config.class_ref = config.class_ref == "target"
                                      ? ClassRef::kTarget
                                      : ClassRef::kPredicted;
  setup.metric_config.info_blur_sigma = config.sic_blur_sigma;
  setup.baseline_config.blur_sigma_max = config.blur_sigma_max;

  // TrainData pools: representations of the first pool-size training images
  // at every layer in use (plus the input layer).
  std::set<std::size_t> pool_layers(setup.layers.begin(), setup.layers.end());
  pool_layers.insert(0);
  const std::size_t pool_size =
      std::min<std::size_t>(config.traindata_pool, setup.train.items.size());
  for (std::size_t layer : pool_layers) {
    std::vector<Tensor> reps;
    reps.reserve(pool_size);
    for (std::size_t i = 0; i < pool_size; ++i)
      reps.push_back(
          setup.model->forward(setup.train.items[i].input).reps[layer]);
    setup.pools.emplace(layer, std::move(reps));
  }
  return setup;
}

double score_map(const ExperimentSetup& setup, MetricId metric,
                 const ExplanationMap& map, const Tensor& x,
                 std::size_t target, const ScoreFn& score_override) {
  if (score_override) return score_override(map, x, target);
  return evaluate_metric_instance(metric, *setup.model, x, target, map.map,
                                  setup.metric_config);
}

ExplanationMap build_type_map(const ExperimentSetup& setup, BaselineType type,
                              std::size_t layer, const Tensor& x,
                              std::size_t target, Rng& rng) {
  const DifferentiableModel& model = *setup.model;
  const bool attention_layer = setup.attention != nullptr && layer >= 1;
  const ForwardTrace trace = model.forward(x);
  const Tensor& x_l = trace.reps[layer];
  const std::vector<Tensor>* pool = pool_for_layer(setup, layer);

  const std::size_t draws =
      type == BaselineType::kTrainData ? setup.config.traindata_avg : 1;
  std::vector<ExplanationMap> maps;
  std::vector<std::size_t> pool_indices;
  maps.reserve(draws);
  for (std::size_t d = 0; d < draws; ++d) {
    BaselineDraw draw =
        sample_baseline(type, x_l, rng, pool, setup.baseline_config);
    if (attention_layer) draw = softmax_normalize_baseline(std::move(draw));
    pool_indices.insert(pool_indices.end(), draw.params.pool_indices.begin(),
                        draw.params.pool_indices.end());

    ExplanationMap map;
    if (attention_layer) {
      map = bee_map_vit(*setup.attention, layer, x, draw, target,
                        setup.config.steps);
    } else if (layer == 0) {
      // Input-space path: the classic integrand on the image itself.
      map = path_integration_map(model, 0, x, draw.tensor, target,
                                 setup.config.steps, Integrand::kGradient);
      map.draw = std::move(draw);
    } else {
      map = bee_map_cnn(model, layer, x, draw, target, setup.config.steps);
    }
    maps.push_back(std::move(map));
  }

  if (draws == 1) return std::move(maps.front());
  ExplanationMap averaged = average_maps(maps);
  averaged.layer = layer;
  if (averaged.draw) averaged.draw->params.pool_indices = pool_indices;
  return averaged;
}

PretrainResult pretrain(ExperimentSetup& setup, const PretrainOptions& options) {
  const std::vector<MetricId> metric_ids = setup.config.metric_set();
  PretrainResult result;
  for (MetricId m : metric_ids)
    result.states.emplace(m, init_state(m, setup.config.context_dim));

  Rng rng(derive_seed(setup.config.seed, kPretrainStream));
  std::vector<std::size_t> order(setup.train.items.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 0; epoch < setup.config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.index(i)]);

    EpochLogRow row;
    row.epoch = epoch;
    double reward_acc = 0.0, score_acc = 0.0;
    std::size_t count = 0;
    for (std::size_t idx : order) {
      const DatasetItem& item = setup.train.items[idx];
      for (MetricId m : metric_ids) {
        BanditState& state = result.states.at(m);
        const std::vector<double> c = setup.context.embed(item.input);
        const BaselineType type = thompson_select(state, c, rng);
        const std::size_t layer = pick_layer(setup.layers, rng);
        const ExplanationMap map =
            build_type_map(setup, type, layer, item.input, item.label, rng);
        const double score = score_map(setup, m, map, item.input, item.label,
                                       options.score_override);
        if (!std::isfinite(score)) {
          ++row.skipped;
          continue;
        }
        const Reward reward = extract_reward(metric_kind(m), metric_direction(m),
                                             score, state.history, rng);
        ArmState& arm = state.arms[static_cast<std::size_t>(type)];
        map_update(arm, setup.context, item.input, reward.y, options.update);
        precision_update(arm, setup.context.embed(item.input));
        reward_acc += reward.y;
        score_acc += score;
        ++count;
      }
    }
    if (count > 0) {
      row.mean_reward = reward_acc / static_cast<double>(count);
      row.mean_score = score_acc / static_cast<double>(count);
    }
    result.log.push_back(row);
  }
  return result;
}

namespace {

// Shared trial loop: per round, pick a type via `select`, build and score a
// map, then let `update` adjust any sequential state.
template <typename SelectFn, typename UpdateFn>
ExplainResult run_trials(const ExperimentSetup& setup, MetricId metric,
                         const Tensor& x, std::size_t target,
                         std::size_t trials, Rng& rng,
                         const ScoreFn& score_override, SelectFn select,
                         UpdateFn update) {
  if (trials < 1)
    throw std::invalid_argument("explain: trials must be >= 1");
  const Direction dir = metric_direction(metric);
  ExplainResult result;
  double best = 0.0;
  bool have_best = false;
  for (std::size_t t = 0; t < trials; ++t) {
    const BaselineType type = select();
    const std::size_t layer = pick_layer(setup.layers, rng);
    ExplanationMap map = build_type_map(setup, type, layer, x, target, rng);
    const double score =
        score_map(setup, metric, map, x, target, score_override);
    map.score = score;
    result.pool.maps.push_back(std::move(map));
    result.scores.push_back(score);
    if (!have_best || direction_adjusted(score, dir) > direction_adjusted(best, dir)) {
      best = score;
      have_best = true;
    }
    const int reward = update(type, score);
    result.trials.push_back({t, type, layer, score, reward, best});
  }
  result.best = select_best(result.pool, result.scores, dir);
  return result;
}

}  // namespace

ExplainResult explain_pbee(const ExperimentSetup& setup,
                           const BanditState& state, const Tensor& x,
                           std::size_t target, std::size_t trials, Rng& rng,
                           const ScoreFn& score_override) {
  const std::vector<double> c = setup.context.embed(x);
  return run_trials(
      setup, state.metric, x, target, trials, rng, score_override,
      [&]() { return thompson_select(state, c, rng); },
      [](BaselineType, double) { return 0; });
}

ExplainResult explain_fbee(const ExperimentSetup& setup,
                           const BanditState& state, const Tensor& x,
                           std::size_t target, std::size_t trials, Rng& rng,
                           const ScoreFn& score_override) {
  BanditState local = state;
  if (local.history.size() > kFinetuneHistoryTail)
    local.history.erase(local.history.begin(),
                        local.history.end() - kFinetuneHistoryTail);
  const std::vector<double> c = setup.context.embed(x);  // theta frozen
  const Direction dir = metric_direction(local.metric);
  return run_trials(
      setup, state.metric, x, target, trials, rng, score_override,
      [&]() { return thompson_select(local, c, rng); },
      [&](BaselineType type, double score) {
        const Reward reward = extract_reward(metric_kind(local.metric), dir,
                                             score, local.history, rng);
        ArmState& arm = local.arms[static_cast<std::size_t>(type)];
        map_update_fixed_context(arm, c, reward.y);
        precision_update(arm, c);
        return reward.y;
      });
}

ExplainResult explain_with_strategy(const ExperimentSetup& setup,
                                    const StrategySpec& spec,
                                    const std::map<MetricId, BanditState>& states,
                                    MetricId metric, const Tensor& x,
                                    std::size_t target, std::size_t trials,
                                    Rng& rng, const ScoreFn& score_override) {
  switch (spec.kind) {
    case StrategyKind::kFbee:
      return explain_fbee(setup, state_for(states, metric, "fbee"), x, target,
                          trials, rng, score_override);
    case StrategyKind::kPbee:
      return explain_pbee(setup, state_for(states, metric, "pbee"), x, target,
                          trials, rng, score_override);
    case StrategyKind::kNbee:
      return run_trials(
          setup, metric, x, target, trials, rng, score_override,
          [&]() { return uniform_select(rng); },
          [](BaselineType, double) { return 0; });
    case StrategyKind::kNcbee: {
      auto arms = std::make_shared<BetaArms>(init_beta_arms());
      auto history = std::make_shared<std::vector<double>>();
      const Direction dir = metric_direction(metric);
      return run_trials(
          setup, metric, x, target, trials, rng, score_override,
          [&, arms]() { return beta_select(*arms, rng); },
          [&, arms, history](BaselineType type, double score) {
            const Reward reward = extract_reward(metric_kind(metric), dir,
                                                 score, *history, rng);
            beta_update(*arms, type, reward.y);
            return reward.y;
          });
    }
    case StrategyKind::kSingle:
      return run_trials(
          setup, metric, x, target, trials, rng, score_override,
          [&]() { return spec.single_type; },
          [](BaselineType, double) { return 0; });
  }
  throw std::invalid_argument("explain_with_strategy: unknown strategy");
}

CurveTable convergence_experiment(const ExperimentSetup& setup,
                                  const std::map<MetricId, BanditState>& states,
                                  const std::vector<std::string>& strategies,
                                  std::size_t iterations,
                                  const ScoreFn& score_override) {
  if (iterations < 1)
    throw std::invalid_argument("convergence_experiment: iterations must be >= 1");
  const MetricId metric = *metric_from_string(setup.config.metric);

  CurveTable table;
  for (std::size_t s = 0; s < strategies.size(); ++s) {
    const StrategySpec spec = parse_strategy(strategies[s]);
    std::vector<double> mean(iterations, 0.0);
    for (std::size_t i = 0; i < setup.test.items.size(); ++i) {
      const DatasetItem& item = setup.test.items[i];
      Rng rng(derive_seed(setup.config.seed,
                          kCurveStream + 1000003 * s + 131 * i));
      const ExplainResult run =
          explain_with_strategy(setup, spec, states, metric, item.input, item.label,
                       iterations, rng, score_override);
      for (std::size_t t = 0; t < iterations; ++t)
        mean[t] += run.trials[t].best_so_far /
                   static_cast<double>(setup.test.items.size());
    }
    table.strategies.push_back(strategies[s]);
    table.curves.push_back(std::move(mean));
  }
  return table;
}

namespace {

struct MethodSpec {
  enum class Kind { kIg, kActIg, kIgFbee, kStrategy } kind = Kind::kIg;
  StrategySpec strategy;
  std::string name;
};

MethodSpec parse_method(const std::string& text) {
  MethodSpec spec;
  spec.name = text;
  if (text == "ig") spec.kind = MethodSpec::Kind::kIg;
  else if (text == "act_ig") spec.kind = MethodSpec::Kind::kActIg;
  else if (text == "ig_fbee") spec.kind = MethodSpec::Kind::kIgFbee;
  else {
    spec.kind = MethodSpec::Kind::kStrategy;
    spec.strategy = parse_strategy(text);
  }
  return spec;
}

ExplanationMap produce_method_map(const ExperimentSetup& setup,
                                  const MethodSpec& method, MetricId metric,
                                  const std::map<MetricId, BanditState>& states,
                                  const Tensor& x, std::size_t target,
                                  Rng& rng) {
  const DifferentiableModel& model = *setup.model;
  switch (method.kind) {
    case MethodSpec::Kind::kIg: {
      const Tensor black(model.input_shape(), 0.0);
      return integrated_gradients(model, x, black, target, setup.config.steps);
    }
    case MethodSpec::Kind::kActIg: {
      const std::size_t layer = model.layer_count();
      if (setup.attention) {
        // Black attention baseline, softmax-normalized to uniform rows.
        BaselineDraw draw;
        draw.kind = BaselineType::kConstant;
        draw.tensor = Tensor(model.layer_shape(layer), 0.0);
        draw = softmax_normalize_baseline(std::move(draw));
        return bee_map_vit(*setup.attention, layer, x, draw, target,
                           setup.config.steps, Integrand::kGradient);
      }
      const Tensor black(model.layer_shape(layer), 0.0);
      return path_integration_map(model, layer, x, black, target,
                                  setup.config.steps, Integrand::kGradient);
    }
    case MethodSpec::Kind::kIgFbee: {
      ExperimentSetup input_space = setup;
      input_space.layers = {0};
      return explain_fbee(input_space, state_for(states, metric, "ig_fbee"), x,
                          target, setup.config.trials, rng)
          .best;
    }
    case MethodSpec::Kind::kStrategy:
      return explain_with_strategy(setup, method.strategy, states, metric, x, target,
                          setup.config.trials, rng, {})
          .best;
  }
  throw std::invalid_argument("produce_method_map: unknown method");
}

bool is_auc_metric(MetricId id) {
  return id != MetricId::kAdp && id != MetricId::kPic;
}

}  // namespace

std::vector<ResultRow> evaluate_suite(const ExperimentSetup& setup,
                                      const std::map<MetricId, BanditState>& states,
                                      const std::vector<std::string>& methods) {
  std::vector<ResultRow> rows;
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    const MethodSpec method = parse_method(methods[mi]);
    for (std::size_t ki = 0; ki < kAllMetrics.size(); ++ki) {
      const MetricId metric = kAllMetrics[ki];
      std::vector<double> values;
      values.reserve(setup.test.items.size());
      for (std::size_t i = 0; i < setup.test.items.size(); ++i) {
        const DatasetItem& item = setup.test.items[i];
        Rng rng(derive_seed(setup.config.seed,
                            kEvalStream + 1000003 * mi + 10007 * ki + i));
        const ExplanationMap map = produce_method_map(
            setup, method, metric, states, item.input, item.label, rng);
        double v = evaluate_metric_instance(metric, *setup.model, item.input,
                                            item.label, map.map,
                                            setup.metric_config);
        if (setup.config.auc_percent && is_auc_metric(metric)) v *= 100.0;
        values.push_back(v);
      }
      ResultRow row;
      row.method = method.name;
      row.metric = metric;
      row.n = values.size();
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= static_cast<double>(values.size());
      double var = 0.0;
      for (double v : values) var += (v - mean) * (v - mean);
      row.mean = mean;
      row.stderr_mean =
          values.size() > 1
              ? std::sqrt(var / static_cast<double>(values.size() - 1)) /
                    std::sqrt(static_cast<double>(values.size()))
              : 0.0;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

CsvTable results_csv(const std::vector<ResultRow>& rows) {
  CsvTable table;
  table.header = "method,metric,direction,mean,stderr,n";
  for (const ResultRow& row : rows) {
    table.rows.push_back(
        {row.method, to_string(row.metric),
         metric_direction(row.metric) == Direction::kLowerBetter ? "lower"
                                                                 : "higher",
         format_double(row.mean), format_double(row.stderr_mean),
         std::to_string(row.n)});
  }
  return table;
}

CsvTable curves_csv(const CurveTable& curves) {
  CsvTable table;
  table.header = "strategy,iteration,mean_score";
  for (std::size_t s = 0; s < curves.strategies.size(); ++s)
    for (std::size_t t = 0; t < curves.curves[s].size(); ++t)
      table.rows.push_back({curves.strategies[s], std::to_string(t + 1),
                            format_double(curves.curves[s][t])});
  return table;
}

CsvTable trials_csv(const std::vector<TrialRow>& trials) {
  CsvTable table;
  table.header = "trial,type,layer,score,reward,best_so_far";
  for (const TrialRow& row : trials)
    table.rows.push_back({std::to_string(row.trial), to_string(row.type),
                          std::to_string(row.layer), format_double(row.score),
                          std::to_string(row.reward),
                          format_double(row.best_so_far)});
  return table;
}

CsvTable pretrain_log_csv(const std::vector<EpochLogRow>& log) {
  CsvTable table;
  table.header = "epoch,mean_reward,mean_score,skipped";
  for (const EpochLogRow& row : log)
    table.rows.push_back({std::to_string(row.epoch),
                          format_double(row.mean_reward),
                          format_double(row.mean_score),
                          std::to_string(row.skipped)});
  return table;
}

double model_accuracy(const DifferentiableModel& model, const Dataset& data) {
  if (data.items.empty()) return 0.0;
  std::size_t correct = 0;
  for (const DatasetItem& item : data.items)
    if (argmax(model.forward(item.input).logits) == item.label) ++correct;
  return static_cast<double>(correct) / static_cast<double>(data.items.size());
}

}  // namespace bee
