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
#ifndef BEE_SNAPSHOT_HPP_
#define BEE_SNAPSHOT_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "bee/bandit.hpp"

namespace bee {

// Persistent bandit state: the shared context parameters plus the per-metric
// arm posteriors and score histories. JSON layout:
//   {version, model_seed, theta,
//    metrics: {metric: {arms: {type: {g, q}}, history}}}
// Serialization is canonical (sorted keys, shortest round-trip floats), so
// save -> load -> save is byte-identical.
struct Snapshot {
  int version = 1;
  std::uint64_t model_seed = 0;
  std::vector<double> theta;
  std::map<MetricId, BanditState> states;
};

std::string snapshot_to_string(const Snapshot& snapshot);
Snapshot snapshot_from_string(const std::string& text);

void save_snapshot(const Snapshot& snapshot, const std::filesystem::path& path);
Snapshot load_snapshot(const std::filesystem::path& path);

}  // namespace bee

#endif  // BEE_SNAPSHOT_HPP_
