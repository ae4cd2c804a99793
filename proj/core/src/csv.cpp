// Copyright 2026 The qgyro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "qgyro/error.hpp"
#include "qgyro/table.hpp"

namespace qgyro {

std::string format_double(double value) {
  // 17 significant digits round-trips every double.
  return fmt::format("{:.16e}", value);
}

void Table::add_meta(std::string key, std::string value) {
  metadata.emplace_back(std::move(key), std::move(value));
}

void Table::add_meta(std::string key, double value) {
  metadata.emplace_back(std::move(key), format_double(value));
}

namespace {

std::string render(const Cell& cell) {
  struct Visitor {
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string quoted = "\"";
      for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      return quoted + '"';
    }
  };
  return std::visit(Visitor{}, cell);
}

}  // namespace

void Table::write(std::ostream& os) const {
  for (const auto& [key, value] : metadata) {
    os << "# " << key << " = " << value << '\n';
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) os << ',';
    os << columns[i];
  }
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << render(row[i]);
    }
    os << '\n';
  }
}

std::string Table::to_string() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

void Table::write_file(const std::string& path) const {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::kConfig, fmt::format("cannot write '{}'", path));
  }
  write(out);
}

}  // namespace qgyro
