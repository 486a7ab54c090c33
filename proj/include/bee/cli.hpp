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
#ifndef BEE_CLI_HPP_
#define BEE_CLI_HPP_

#include <string>
#include <vector>

namespace bee {

// Command-line front door. Exit status: 0 on success, 1 on validation
// errors (bad config/arguments/missing inputs), 2 on runtime failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace bee

#endif  // BEE_CLI_HPP_
