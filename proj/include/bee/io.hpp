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
#ifndef BEE_IO_HPP_
#define BEE_IO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "bee/tensor.hpp"

namespace bee {

// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

std::string read_text_file(const std::filesystem::path& path);

// CSV with the given header line; every row must match its width.
void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows);

// 2D map as a CSV grid of raw values.
void write_map_csv(const std::filesystem::path& path, const Tensor& map);

// 2D map as a plain-text PGM (P2), values scaled to 0..255.
void write_map_pgm(const std::filesystem::path& path, const Tensor& map);

}  // namespace bee

#endif  // BEE_IO_HPP_
