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
#include "bee/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <stdexcept>

#include "CLI11.hpp"

#include "bee/harness.hpp"
#include "bee/io.hpp"
#include "bee/selftest.hpp"
#include "bee/snapshot.hpp"

namespace bee {

namespace {

namespace fs = std::filesystem;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = "out";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config_path,
                  "JSON run configuration file");
  cmd->add_option("-D,--set", args.overrides,
                  "config override key=value (repeatable)");
  cmd->add_option("-o,--out", args.out_dir, "output directory");
}

RunConfig load_config(const CommonArgs& args) {
  RunConfig config;
  if (!args.config_path.empty()) {
    if (!fs::exists(args.config_path))
      throw std::invalid_argument("config file not found: " + args.config_path);
    config = RunConfig::from_json_text(read_text_file(args.config_path));
  }
  if (const char* env_seed = std::getenv("BEE_SEED")) {
    try {
      config.seed = std::stoull(env_seed);
    } catch (const std::exception&) {
      throw std::invalid_argument("BEE_SEED must be an unsigned integer");
    }
  }
  for (const std::string& assignment : args.overrides)
    config.apply_override(assignment);
  config.validate();
  return config;
}

fs::path prepare_out_dir(const CommonArgs& args) {
  const fs::path dir(args.out_dir);
  fs::create_directories(dir);
  return dir;
}

Snapshot load_snapshot_checked(const std::string& path,
                               const ExperimentSetup& setup) {
  if (path.empty() || !fs::exists(path))
    throw std::invalid_argument("snapshot file not found: " + path);
  Snapshot snapshot;
  try {
    snapshot = load_snapshot(path);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("snapshot: ") + e.what());
  }
  if (snapshot.model_seed != setup.model_seed)
    throw std::invalid_argument(
        "snapshot was produced under a different master seed");
  if (snapshot.theta.size() != setup.context.param_count())
    throw std::invalid_argument("snapshot theta does not fit the context network");
  for (const auto& [metric, state] : snapshot.states)
    for (const ArmState& arm : state.arms)
      if (arm.g.size() != setup.config.context_dim)
        throw std::invalid_argument("snapshot arm dimension mismatch");
  return snapshot;
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  for (char c : csv) {
    if (c == ',') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else {
      item += c;
    }
  }
  if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_pretrain(const CommonArgs& args) {
  const RunConfig config = load_config(args);
  const fs::path out = prepare_out_dir(args);
  ExperimentSetup setup = make_setup(config);
  const PretrainResult result = pretrain(setup);

  Snapshot snapshot;
  snapshot.model_seed = setup.model_seed;
  snapshot.theta = setup.context.params();
  snapshot.states = result.states;
  save_snapshot(snapshot, out / "snapshot.json");

  const CsvTable log = pretrain_log_csv(result.log);
  write_csv(out / "pretrain_log.csv", log.header, log.rows);
  std::cout << "pretrained " << result.states.size() << " metric state(s) over "
            << config.epochs << " epoch(s); snapshot written to "
            << (out / "snapshot.json").string() << "\n";
  return 0;
}

int cmd_explain(const CommonArgs& args, const std::string& snapshot_path,
                std::size_t index) {
  const RunConfig config = load_config(args);
  const fs::path out = prepare_out_dir(args);
  ExperimentSetup setup = make_setup(config);
  const Snapshot snapshot = load_snapshot_checked(snapshot_path, setup);
  setup.context.set_params(snapshot.theta);

  if (index >= setup.test.items.size())
    throw std::invalid_argument("explain: --index beyond the test split");
  const DatasetItem& item = setup.test.items[index];

  const auto metric = *metric_from_string(config.metric);
  const StrategySpec strategy = parse_strategy(config.strategy);
  Rng rng(derive_seed(config.seed, 0xe281a1 + index));
  const ExplainResult result =
      explain_with_strategy(setup, strategy, snapshot.states, metric,
                            item.input, item.label, config.trials, rng);

  const std::string stem = "map_" + std::to_string(index);
  write_map_pgm(out / (stem + ".pgm"), result.best.map);
  write_map_csv(out / (stem + ".csv"), result.best.map);
  const CsvTable trials = trials_csv(result.trials);
  write_csv(out / ("trials_" + std::to_string(index) + ".csv"), trials.header,
            trials.rows);
  std::cout << "explained test item " << index << " ("
            << result.trials.size() << " trial(s)); best score "
            << format_double(result.best.score.value_or(0.0)) << "\n";
  return 0;
}

int cmd_eval(const CommonArgs& args, const std::string& snapshot_path,
             const std::string& methods_csv) {
  const RunConfig config = load_config(args);
  const fs::path out = prepare_out_dir(args);
  ExperimentSetup setup = make_setup(config);
  const Snapshot snapshot = load_snapshot_checked(snapshot_path, setup);
  setup.context.set_params(snapshot.theta);

  const std::vector<std::string> methods = split_list(methods_csv);
  if (methods.empty())
    throw std::invalid_argument("eval: --methods must name at least one method");
  const std::vector<ResultRow> rows =
      evaluate_suite(setup, snapshot.states, methods);
  const CsvTable table = results_csv(rows);
  write_csv(out / "results.csv", table.header, table.rows);
  std::cout << "evaluated " << methods.size() << " method(s) over "
            << setup.test.items.size() << " test item(s); results written to "
            << (out / "results.csv").string() << "\n";
  return 0;
}

int cmd_curves(const CommonArgs& args, const std::string& snapshot_path,
               const std::string& strategies_csv, std::size_t iterations) {
  const RunConfig config = load_config(args);
  const fs::path out = prepare_out_dir(args);
  ExperimentSetup setup = make_setup(config);

  std::map<MetricId, BanditState> states;
  if (!snapshot_path.empty()) {
    const Snapshot snapshot = load_snapshot_checked(snapshot_path, setup);
    setup.context.set_params(snapshot.theta);
    states = snapshot.states;
  } else {
    for (MetricId m : config.metric_set())
      states.emplace(m, init_state(m, config.context_dim));
  }

  const std::vector<std::string> strategies = split_list(strategies_csv);
  if (strategies.empty())
    throw std::invalid_argument("curves: --strategies must name at least one");
  const CurveTable curves =
      convergence_experiment(setup, states, strategies, iterations);
  const CsvTable table = curves_csv(curves);
  write_csv(out / "curves.csv", table.header, table.rows);
  std::cout << "emitted " << strategies.size() << " convergence curve(s) of "
            << iterations << " iteration(s) to "
            << (out / "curves.csv").string() << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Baseline exploration-exploitation attribution workbench"};
  app.require_subcommand(1);

  CommonArgs pretrain_args, explain_args, eval_args, curves_args;
  std::string explain_snapshot, eval_snapshot, curves_snapshot;
  std::size_t explain_index = 0;
  std::string eval_methods = "ig,act_ig,pbee,fbee,nbee";
  std::string curves_strategies =
      "fbee,pbee,nbee,single:Normal,single:Uniform,single:Blur,"
      "single:Constant,single:TrainData";
  std::size_t curves_iterations = 100;

  CLI::App* pretrain_cmd =
      app.add_subcommand("pretrain", "learn the baseline distribution");
  add_common(pretrain_cmd, pretrain_args);

  CLI::App* explain_cmd =
      app.add_subcommand("explain", "produce a map for one test instance");
  add_common(explain_cmd, explain_args);
  explain_cmd->add_option("-s,--snapshot", explain_snapshot, "state snapshot")
      ->required();
  explain_cmd->add_option("--index", explain_index, "test instance index");

  CLI::App* eval_cmd =
      app.add_subcommand("eval", "evaluate methods across all metrics");
  add_common(eval_cmd, eval_args);
  eval_cmd->add_option("-s,--snapshot", eval_snapshot, "state snapshot")
      ->required();
  eval_cmd->add_option("--methods", eval_methods, "comma-separated methods");

  CLI::App* curves_cmd =
      app.add_subcommand("curves", "convergence curves per strategy");
  add_common(curves_cmd, curves_args);
  curves_cmd->add_option("-s,--snapshot", curves_snapshot, "state snapshot");
  curves_cmd->add_option("--strategies", curves_strategies,
                         "comma-separated strategies");
  curves_cmd->add_option("--iterations", curves_iterations,
                         "iterations per instance");

  CLI::App* selftest_cmd =
      app.add_subcommand("selftest", "run the invariant suite");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      std::cout << app.help();
      return 0;
    }
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (pretrain_cmd->parsed()) return cmd_pretrain(pretrain_args);
    if (explain_cmd->parsed())
      return cmd_explain(explain_args, explain_snapshot, explain_index);
    if (eval_cmd->parsed()) return cmd_eval(eval_args, eval_snapshot, eval_methods);
    if (curves_cmd->parsed())
      return cmd_curves(curves_args, curves_snapshot, curves_strategies,
                        curves_iterations);
    if (selftest_cmd->parsed())
      return run_selftest(std::cout) == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace bee
