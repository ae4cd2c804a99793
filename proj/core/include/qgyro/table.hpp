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

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qgyro {

using Cell = std::variant<double, long long, std::string>;

/// CSV table with '#'-prefixed metadata lines above the header row.
/// Doubles print in scientific notation with 17 significant digits.
struct Table {
  std::string name;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_meta(std::string key, std::string value);
  void add_meta(std::string key, double value);
  void write(std::ostream& os) const;
  std::string to_string() const;
  /// Writes to `path`, creating parent directories.
  void write_file(const std::string& path) const;
};

std::string format_double(double value);

}  // namespace qgyro
