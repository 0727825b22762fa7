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
#include <span>
#include <vector>

#include "fpp/lattice.hpp"
#include "fpp/weights.hpp"

namespace fpp {

/// Exhaustive ground truth for one pair: every self-avoiding path of
/// minimal weight, found by depth-first enumeration in exact arithmetic.
struct EnumerationResult {
  VertexId a = kNoVertex;
  VertexId b = kNoVertex;
  /// Passage time numerator (units of 2^-g).
  std::int64_t time = 0;
  /// Optimal paths a -> b, lexicographically sorted.
  std::vector<std::vector<VertexId>> paths;
  /// Some branch cut by the length cap could still have been optimal.
  bool partial = false;

  std::uint64_t count() const { return paths.size(); }
  std::int64_t min_len() const;
  std::int64_t max_len() const;
  /// min over optimal paths of #{e : tau_e >= threshold}.
  std::int64_t min_heavy(const WeightField& field, double threshold) const;
};

/// Enumerates self-avoiding paths of at most length_cap edges. Exact mode
/// only; boxes beyond radius 3 need allow_large. Throws
/// std::invalid_argument when length_cap < |a-b|_1.
EnumerationResult brute_force(const WeightField& field, VertexId a, VertexId b, std::int64_t length_cap,
                              bool allow_large = false);

/// Bad-index answers for one ray from the enumerated optimal paths:
/// index i >= 2 is bad iff some optimal path probe -> ray[i] meets the ray
/// only at ray[i].
std::vector<std::int64_t> oracle_bad_indices(const WeightField& field, std::span<const VertexId> ray,
                                             VertexId probe, std::int64_t length_cap);

}  // namespace fpp
