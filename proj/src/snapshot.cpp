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
#include "bee/snapshot.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

#include "bee/io.hpp"

namespace bee {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kSnapshotVersion = 1;

ordered_json vector_to_json(const std::vector<double>& v) {
  ordered_json arr = ordered_json::array();
  for (double x : v) arr.push_back(x);
  return arr;
}

std::vector<double> vector_from_json(const json& arr, const char* what) {
  if (!arr.is_array())
    throw std::runtime_error(std::string("snapshot: expected array for ") + what);
  std::vector<double> v;
  v.reserve(arr.size());
  for (const auto& x : arr) {
    if (!x.is_number())
      throw std::runtime_error(std::string("snapshot: non-numeric entry in ") + what);
    const double d = x.get<double>();
    if (!std::isfinite(d))
      throw std::runtime_error(std::string("snapshot: non-finite value in ") + what);
    v.push_back(d);
  }
  return v;
}

}  // namespace

std::string snapshot_to_string(const Snapshot& snapshot) {
  // Keys are emitted in sorted order for a canonical byte layout.
  ordered_json root;
  root["metrics"] = ordered_json::object();
  for (const auto& [metric, state] : snapshot.states) {
    ordered_json entry;
    ordered_json arms = ordered_json::object();
    for (std::size_t a = 0; a < state.arms.size(); ++a) {
      ordered_json arm;
      arm["g"] = vector_to_json(state.arms[a].g);
      arm["q"] = vector_to_json(state.arms[a].q);
      arms[to_string(kAllBaselineTypes[a])] = std::move(arm);
    }
    entry["arms"] = std::move(arms);
    entry["history"] = vector_to_json(state.history);
    root["metrics"][to_string(metric)] = std::move(entry);
  }
  root["model_seed"] = snapshot.model_seed;
  root["theta"] = vector_to_json(snapshot.theta);
  root["version"] = snapshot.version;

  return root.dump(2) + "\n";
}

Snapshot snapshot_from_string(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("snapshot: parse error: ") + e.what());
  }
  if (!root.is_object() || !root.contains("version") ||
      !root.contains("model_seed") || !root.contains("theta") ||
      !root.contains("metrics"))
    throw std::runtime_error("snapshot: missing required top-level fields");

  Snapshot snapshot;
  snapshot.version = root["version"].get<int>();
  if (snapshot.version != kSnapshotVersion)
    throw std::runtime_error("snapshot: unsupported version " +
                             std::to_string(snapshot.version));
  snapshot.model_seed = root["model_seed"].get<std::uint64_t>();
  snapshot.theta = vector_from_json(root["theta"], "theta");

  for (const auto& [name, entry] : root["metrics"].items()) {
    const auto metric = metric_from_string(name);
    if (!metric)
      throw std::runtime_error("snapshot: unknown metric '" + name + "'");
    BanditState state;
    state.metric = *metric;
    if (!entry.contains("arms") || !entry.contains("history"))
      throw std::runtime_error("snapshot: metric entry missing arms/history");
    state.arms.resize(kBaselineTypeCount);
    for (std::size_t a = 0; a < kBaselineTypeCount; ++a) {
      const char* type_name = to_string(kAllBaselineTypes[a]);
      if (!entry["arms"].contains(type_name))
        throw std::runtime_error(std::string("snapshot: missing arm '") +
                                 type_name + "'");
      const auto& arm = entry["arms"][type_name];
      state.arms[a].g = vector_from_json(arm["g"], "g");
      state.arms[a].q = vector_from_json(arm["q"], "q");
      if (state.arms[a].g.size() != state.arms[a].q.size())
        throw std::runtime_error("snapshot: arm g/q length mismatch");
      for (double qv : state.arms[a].q)
        if (qv <= 0.0)
          throw std::runtime_error("snapshot: precision must be positive");
    }
    state.history = vector_from_json(entry["history"], "history");
    snapshot.states.emplace(*metric, std::move(state));
  }
  return snapshot;
}

void save_snapshot(const Snapshot& snapshot,
                   const std::filesystem::path& path) {
  write_text_file(path, snapshot_to_string(snapshot));
}

Snapshot load_snapshot(const std::filesystem::path& path) {
  return snapshot_from_string(read_text_file(path));
}

}  // namespace bee
