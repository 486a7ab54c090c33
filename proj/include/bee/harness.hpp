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
#ifndef BEE_HARNESS_HPP_
#define BEE_HARNESS_HPP_

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bee/bandit.hpp"
#include "bee/context_network.hpp"
#include "bee/dataset.hpp"
#include "bee/snapshot.hpp"

namespace bee {

// Full experiment definition. Everything downstream is a deterministic
// function of this struct.
struct RunConfig {
  std::string model = "tiny_cnn";  // tiny_cnn | tiny_attention
  std::string metric = "DEL";
  std::vector<std::string> metrics;  // pretraining set; empty -> all metrics
  std::size_t trials = 8;            // baselines sampled per instance (T)
  std::size_t steps = 10;            // interpolation steps (n)
  std::vector<std::size_t> layers;   // integration layers; empty -> last layer
  std::string strategy = "fbee";     // fbee|pbee|nbee|ncbee|single:<Type>
  std::uint64_t seed = 7;
  std::size_t context_dim = 16;
  std::size_t classes = 4;
  std::size_t train_items = 256;
  std::size_t test_items = 32;
  std::size_t epochs = 20;
  std::size_t traindata_pool = 16;  // training images available as baselines
  std::size_t traindata_avg = 16;   // maps averaged per TrainData draw
  double blur_sigma_max = 50.0;
  double sic_blur_sigma = 4.0;
  std::string class_ref = "target";  // target | predicted
  bool auc_percent = true;           // report AUC metrics on the 0..100 scale

  static RunConfig from_json_text(const std::string& text);
  std::string to_json_text() const;
  // "key=value"; the value is parsed as JSON when possible, else as a string.
  void apply_override(const std::string& assignment);
  void validate() const;

  std::vector<MetricId> metric_set() const;
};

enum class StrategyKind { kFbee, kPbee, kNbee, kNcbee, kSingle };

struct StrategySpec {
  StrategyKind kind = StrategyKind::kFbee;
  BaselineType single_type = BaselineType::kNormal;
  std::string name;
};

StrategySpec parse_strategy(const std::string& text);

// Materialized experiment: models, context network, data splits and the
// TrainData representation pools. Copyable; the model is shared.
struct ExperimentSetup {
  RunConfig config;
  std::shared_ptr<DifferentiableModel> model;
  const AttentionModel* attention = nullptr;  // non-null for tiny_attention
  ContextNetwork context;
  Dataset train;
  Dataset test;
  std::vector<std::size_t> layers;
  std::map<std::size_t, std::vector<Tensor>> pools;  // layer -> representations
  MetricConfig metric_config;
  BaselineConfig baseline_config;
  std::uint64_t model_seed = 0;
};

ExperimentSetup make_setup(const RunConfig& config);

// Test hook: replaces the per-instance metric scoring of a map. Empty means
// the configured metric is evaluated for real.
using ScoreFn =
    std::function<double(const ExplanationMap&, const Tensor& x, std::size_t target)>;

double score_map(const ExperimentSetup& setup, MetricId metric,
                 const ExplanationMap& map, const Tensor& x,
                 std::size_t target, const ScoreFn& score_override = {});

// Draws one baseline of the given type at the given layer and builds the
// corresponding attribution map (TrainData draws are averaged over
// config.traindata_avg pool members).
ExplanationMap build_type_map(const ExperimentSetup& setup, BaselineType type,
                              std::size_t layer, const Tensor& x,
                              std::size_t target, Rng& rng);

struct EpochLogRow {
  std::size_t epoch = 0;
  double mean_reward = 0.0;
  double mean_score = 0.0;
  std::size_t skipped = 0;
};

struct PretrainOptions {
  ScoreFn score_override;
  MapUpdateOptions update;
};

struct PretrainResult {
  std::map<MetricId, BanditState> states;
  std::vector<EpochLogRow> log;
};

// One bandit round (select -> sample -> map -> score -> reward -> updates)
// per training instance, metric and epoch; trains theta jointly.
PretrainResult pretrain(ExperimentSetup& setup,
                        const PretrainOptions& options = {});

struct TrialRow {
  std::size_t trial = 0;
  BaselineType type = BaselineType::kNormal;
  std::size_t layer = 0;
  double score = 0.0;
  int reward = 0;  // +1/-1 on sequential strategies, 0 otherwise
  double best_so_far = 0.0;
};

struct ExplainResult {
  ExplanationMap best;
  MapPool pool;
  std::vector<double> scores;
  std::vector<TrialRow> trials;
};

// Pretrained inference: T draws without any state update, best map by the
// metric. The passed state is never mutated.
ExplainResult explain_pbee(const ExperimentSetup& setup,
                           const BanditState& state, const Tensor& x,
                           std::size_t target, std::size_t trials, Rng& rng,
                           const ScoreFn& score_override = {});

// Finetuned inference: T sequential bandit rounds on an instance-local copy
// of the state with theta frozen; the shared state is never mutated.
ExplainResult explain_fbee(const ExperimentSetup& setup,
                           const BanditState& state, const Tensor& x,
                           std::size_t target, std::size_t trials, Rng& rng,
                           const ScoreFn& score_override = {});

// Dispatches on the strategy kind (fbee/pbee need the pretrained state for
// the metric, the rest ignore it).
ExplainResult explain_with_strategy(const ExperimentSetup& setup,
                                    const StrategySpec& strategy,
                                    const std::map<MetricId, BanditState>& states,
                                    MetricId metric, const Tensor& x,
                                    std::size_t target, std::size_t trials,
                                    Rng& rng, const ScoreFn& score_override = {});

struct CurveTable {
  std::vector<std::string> strategies;
  // mean best-so-far score per strategy, indexed [strategy][iteration]
  std::vector<std::vector<double>> curves;
};

// Per-strategy mean best-so-far curves over the test split (the convergence
// experiment). Direction-adjusted: every curve is weakly monotonic in its
// metric's better direction.
CurveTable convergence_experiment(const ExperimentSetup& setup,
                                  const std::map<MetricId, BanditState>& states,
                                  const std::vector<std::string>& strategies,
                                  std::size_t iterations,
                                  const ScoreFn& score_override = {});

struct ResultRow {
  std::string method;
  MetricId metric = MetricId::kDel;
  double mean = 0.0;
  double stderr_mean = 0.0;
  std::size_t n = 0;
};

// All-metric evaluation of the given methods over the test split.
// Methods: ig, act_ig, ig_fbee, pbee, fbee, nbee, ncbee, single:<Type>.
std::vector<ResultRow> evaluate_suite(const ExperimentSetup& setup,
                                      const std::map<MetricId, BanditState>& states,
                                      const std::vector<std::string>& methods);

// CSV table renderings (header + rows of formatted fields).
struct CsvTable {
  std::string header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable results_csv(const std::vector<ResultRow>& rows);
CsvTable curves_csv(const CurveTable& table);
CsvTable trials_csv(const std::vector<TrialRow>& trials);
CsvTable pretrain_log_csv(const std::vector<EpochLogRow>& log);

// Classification accuracy of the model over a dataset.
double model_accuracy(const DifferentiableModel& model, const Dataset& data);

}  // namespace bee

#endif  // BEE_HARNESS_HPP_
