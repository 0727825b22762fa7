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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpp/fpt.hpp"
#include "fpp/lattice.hpp"

namespace fpp {

/// A finite optimal path from a source to a boundary vertex of the box.
/// Indices are 1-based: at(1) is the source.
struct Ray {
  VertexId source = kNoVertex;
  std::vector<VertexId> vertices;

  std::int64_t length() const noexcept { return static_cast<std::int64_t>(vertices.size()); }
  VertexId at(std::int64_t i) const { return vertices.at(static_cast<std::size_t>(i - 1)); }
  VertexId terminal() const { return vertices.back(); }
  /// 1-based index of v on the ray, 0 when absent.
  std::int64_t index_of(VertexId v) const;
};

/// One ray per reachable boundary vertex, in vertex-id order, each the
/// canonical path of the DAG (smallest-id predecessor rule).
std::vector<Ray> boundary_rays(const GeodesicDag& dag);

struct AvoidQuery {
  std::vector<VertexId> forbidden_vertices;
  std::vector<EdgeId> forbidden_edges;
};

struct AvoidResult {
  bool exists = false;
  /// A source -> target optimal path avoiding the forbidden set, when one exists.
  std::vector<VertexId> witness;
};

/// Whether some optimal path source -> target avoids every forbidden vertex
/// and edge: reachability in the DAG with those removed. Throws
/// UnreachableTarget, and std::invalid_argument when the source or target
/// is forbidden.
AvoidResult exists_avoiding_optimal_path(const GeodesicDag& dag, VertexId target, const AvoidQuery& query);

enum class SKind { none, finite, horizon };

/// S(ray) = max bad index. `horizon` flags a maximum in the last 10% of
/// the ray, where infinitely many bad points cannot be ruled out.
struct SStatistic {
  SKind kind = SKind::none;
  std::int64_t value = 0;

  std::string to_string() const;
  friend bool operator==(const SStatistic&, const SStatistic&) = default;
};

SStatistic s_statistic(std::span<const std::int64_t> bad_indices, std::int64_t ray_length);

enum class BadnessMode {
  /// x is bad iff some optimal path probe -> x meets the ray only at x.
  general,
  /// x is bad iff the unique optimal path probe -> x meets the ray only at
  /// x; throws NonUniqueGeodesic when that path is not unique.
  unique,
};

struct BadPointReport {
  Ray ray;
  VertexId probe_source = kNoVertex;
  std::vector<std::int64_t> bad_indices;
  /// Witness optimal path for each bad index (same order).
  std::vector<std::vector<VertexId>> witnesses;
  SStatistic s;
  /// The probe source lies on the ray at an index >= 2.
  bool degenerate = false;
};

/// Bad indices of the ray relative to the DAG's source; index 1 is never
/// reported.
BadPointReport bad_indices(const Ray& ray, const GeodesicDag& probe_dag, const WeightField& field,
                           BadnessMode mode = BadnessMode::general);

struct RKStatistics {
  /// R = min over rays of S.
  SStatistic r;
  /// K = min of t(probe, ray[R]) over rays attaining R; absent when R is
  /// not finite.
  std::optional<double> k;
  /// Index (into the ray list) of the first ray attaining R.
  std::int64_t ray = -1;
};

RKStatistics rk_statistics(std::span<const BadPointReport> reports, const PassageTimes& probe_times);

enum class Coalescence { coalesce, distinct, indeterminate };

std::string to_string(Coalescence c);

struct CoalescenceVerdict {
  std::int64_t horizon = 0;
  std::int64_t shared_beyond_horizon = 0;
  bool shared_terminal = false;
  Coalescence verdict = Coalescence::indeterminate;
};

/// Shared vertices at l_inf distance > horizon from both ray sources.
/// Requires 0 <= horizon < box radius.
CoalescenceVerdict classify_coalescence(const Box& box, const Ray& r1, const Ray& r2, std::int64_t horizon);

}  // namespace fpp
