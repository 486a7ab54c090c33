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
#ifndef BEE_SELFTEST_HPP_
#define BEE_SELFTEST_HPP_

#include <ostream>

namespace bee {

// Runs the library's invariant suite, printing one pass/fail line per
// property. Returns the number of failed properties.
int run_selftest(std::ostream& out);

}  // namespace bee

#endif  // BEE_SELFTEST_HPP_
