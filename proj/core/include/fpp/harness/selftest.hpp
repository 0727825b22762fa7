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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fpp/harness/table.hpp"
#include "fpp/weights.hpp"

namespace fpp::harness {

/// Weight families of the oracle-equivalence suite.
enum class SelftestFamily { unit, bernoulli, three_point, discrete_uniform };

std::string to_string(SelftestFamily f);

/// Exact small fields: unit weights; Bernoulli{0,1} with P(0) = 0.3; the
/// table 1@0.4, 2@0.35, 5@0.25; uniform(0,1) on the grid 2^-3.
WeightField selftest_field(SelftestFamily family, int radius, std::uint64_t seed);

struct SelftestOptions {
  int fixtures = 50;
  std::uint64_t seed = 0;
  /// Radii alternate between 2 and max_radius.
  int max_radius = 3;
  unsigned workers = 1;
};

struct SelftestMismatch {
  int fixture = 0;
  std::string quantity;
  std::string a;
  std::string b;
  std::string expected;
  std::string got;
};

struct SelftestReport {
  int fixtures = 0;
  std::uint64_t pairs = 0;
  std::uint64_t rays = 0;
  std::vector<SelftestMismatch> mismatches;
  /// One row per fixture.
  Table table;

  bool passed() const { return mismatches.empty(); }
  nlohmann::json to_json() const;
};

/// Compares fpt and geodesics against exhaustive enumeration on every
/// (source, target) pair from one seeded source per fixture: passage time,
/// the set of optimal paths, path count, extremal lengths, min-heavy count,
/// and the bad indices of every boundary ray from a second source.
SelftestReport run_selftest(const SelftestOptions& options);

}  // namespace fpp::harness
