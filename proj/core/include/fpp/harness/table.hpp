// Copyright 2026 The fpplab Authors
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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace fpp::harness {

using Cell = std::variant<std::int64_t, std::uint64_t, double, bool, std::string>;

/// Deterministic text form: integers in decimal, doubles in the shortest
/// representation that round-trips, bools as 0/1.
std::string format_cell(const Cell& cell);
std::string format_double(double x);

/// A CSV table with a fixed header.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
  std::size_t column(const std::string& name) const;
  /// Column values as doubles (ints and bools converted).
  std::vector<double> numbers(const std::string& name) const;
};

/// RFC 4180 with LF line endings: fields containing a comma, quote or line
/// break are quoted, embedded quotes doubled.
std::string csv_escape(const std::string& field);
void write_csv(std::ostream& out, const Table& table);
std::string to_csv(const Table& table);

/// Writes text to a file, creating parent directories. Throws Error when
/// the file cannot be written.
void write_text_file(const std::string& path, const std::string& text);

/// JSON text with two-space indent and a trailing newline.
std::string dump_json(const nlohmann::json& doc);

}  // namespace fpp::harness
