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
#include "bee/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bee {

std::string format_double(double v) {
  // Shortest representation that parses back exactly.
  for (int precision = 1; precision <= 17; ++precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return "0";
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows) {
  const std::size_t width =
      static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
  std::ostringstream out;
  out << header << '\n';
  for (const auto& row : rows) {
    if (row.size() != width)
      throw std::invalid_argument("write_csv: row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

void write_map_csv(const std::filesystem::path& path, const Tensor& map) {
  if (map.rank() != 2)
    throw std::invalid_argument("write_map_csv: map must be rank 2");
  std::ostringstream out;
  for (std::size_t i = 0; i < map.dim(0); ++i) {
    for (std::size_t j = 0; j < map.dim(1); ++j) {
      if (j) out << ',';
      out << format_double(map(i, j));
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

void write_map_pgm(const std::filesystem::path& path, const Tensor& map) {
  if (map.rank() != 2)
    throw std::invalid_argument("write_map_pgm: map must be rank 2");
  std::ostringstream out;
  out << "P2\n" << map.dim(1) << ' ' << map.dim(0) << "\n255\n";
  for (std::size_t i = 0; i < map.dim(0); ++i) {
    for (std::size_t j = 0; j < map.dim(1); ++j) {
      const double v = std::clamp(map(i, j), 0.0, 1.0);
      if (j) out << ' ';
      out << static_cast<int>(std::lround(v * 255.0));
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

}  // namespace bee
