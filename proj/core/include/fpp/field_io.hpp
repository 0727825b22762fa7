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
#include <vector>

#include "fpp/lattice.hpp"
#include "fpp/weights.hpp"

namespace fpp {

/// A hand-specified exact field plus free-form expectations.
///
/// Text format, one directive per line, '#' starts a comment:
///   dimension 2
///   radius 1
///   grid_exponent 0
///   default 1              weight numerator of unlisted edges
///   edge -1,0 0,0 3        endpoints and numerator
///   expect <tokens...>     kept verbatim for the test that reads it
struct Fixture {
  std::string name;
  int dimension = 2;
  int radius = 1;
  int grid_exponent = 0;
  std::int64_t default_numerator = 1;
  std::vector<std::pair<Edge, std::int64_t>> edges;
  std::vector<std::vector<std::string>> expectations;

  WeightField field() const;
  /// Expectations whose first token equals `tag`.
  std::vector<std::vector<std::string>> expect(const std::string& tag) const;
};

/// Throws ConfigError with the line number on malformed input.
Fixture parse_fixture(std::istream& in, const std::string& name = "fixture");
Fixture load_fixture(const std::string& path);
void write_fixture(std::ostream& out, const Fixture& fixture);

/// Field dump: a header line "# fpplab-field dimension <d> radius <r> mode
/// <exact|float>" then one line per edge "<a> <b> <numerator> <g>", the
/// weight being numerator * 2^-g. Floating weights are written as their
/// exact binary mantissa, so a dump round-trips bit for bit.
void write_field(std::ostream& out, const WeightField& field);
WeightField read_field(std::istream& in);

}  // namespace fpp
