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
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fpp/lattice.hpp"
#include "fpp/weights.hpp"

namespace fpp {

inline constexpr std::int64_t kUnreachedExact = std::numeric_limits<std::int64_t>::max();

/// Tie tolerance for the geodesic DAG: u -> v is tight iff
/// t(u) + tau(u,v) <= t(v) + absolute + relative * t(v).
struct Tolerance {
  double absolute = 0;
  double relative = 0;

  static Tolerance exact() { return {}; }
  /// absolute = relative = 2^-40.
  static Tolerance floating_default() { return {0x1.0p-40, 0x1.0p-40}; }
  static Tolerance for_mode(WeightMode mode) {
    return mode == WeightMode::exact ? exact() : floating_default();
  }
};

struct ShortestPathOptions {
  /// When non-empty, stop once every target is settled and no vertex at a
  /// (within tolerance) equal time remains queued. Other vertices may be
  /// left unreached.
  std::vector<VertexId> targets;
  /// Leave vertices with t > cutoff unreached (real units).
  std::optional<double> cutoff;
};

/// t(source, .) over one box, in the weight field's arithmetic.
class PassageTimes {
 public:
  const Box& box() const noexcept { return *box_; }
  const BoxPtr& box_ptr() const noexcept { return box_; }
  VertexId source() const noexcept { return source_; }
  Coord source_coord() const { return box_->coord(source_); }
  WeightMode mode() const noexcept { return mode_; }
  int grid_exponent() const noexcept { return grid_exponent_; }

  bool reached(VertexId v) const;
  /// Real passage time; +infinity when unreached.
  double time(VertexId v) const;
  double time(const Coord& v) const { return time(box_->vertex_id(v)); }
  /// Exact numerator (units of 2^-g); kUnreachedExact when unreached.
  std::int64_t exact_time(VertexId v) const;
  /// t(v) >= x, decided exactly in exact mode.
  bool at_least(VertexId v, double x) const;

  std::span<const std::int64_t> exact_times() const noexcept { return exact_; }
  std::span<const double> float_times() const noexcept { return float_; }

 private:
  friend PassageTimes shortest_paths(const WeightField&, VertexId, const ShortestPathOptions&);
  BoxPtr box_;
  VertexId source_ = kNoVertex;
  WeightMode mode_ = WeightMode::exact;
  int grid_exponent_ = 0;
  std::vector<std::int64_t> exact_;
  std::vector<double> float_;
};

/// Dijkstra restricted to paths inside the field's box. This upper-bounds
/// the lattice passage time; the two agree for pairs far from the boundary.
PassageTimes shortest_paths(const WeightField& field, VertexId source,
                            const ShortestPathOptions& options = {});
PassageTimes shortest_paths(const WeightField& field, const Coord& source,
                            const ShortestPathOptions& options = {});

/// Total weight of a vertex path (real units). Throws when two consecutive
/// vertices are not adjacent.
double path_weight(const WeightField& field, std::span<const VertexId> path);
/// Exact numerator of the path weight; exact mode only.
std::int64_t path_weight_exact(const WeightField& field, std::span<const VertexId> path);
/// True iff the path attains t(front, back) in the field's arithmetic
/// (within the mode's default tolerance in floating mode).
bool is_optimal_path(const WeightField& field, std::span<const VertexId> path);

/// All optimal paths from one source, as a predecessor structure.
///
/// Tight edges u -> v (see Tolerance) are split into directed edges and
/// level edges, the latter tight in both directions (zero-weight ties in
/// exact mode). Level edges group vertices into clusters; the directed
/// edges between clusters form an acyclic graph. Source-to-x optimal paths
/// are exactly the self-avoiding paths of tight steps, and every such path
/// visits each cluster in one contiguous run.
class GeodesicDag {
 public:
  const Box& box() const noexcept { return *box_; }
  const BoxPtr& box_ptr() const noexcept { return box_; }
  VertexId source() const noexcept { return source_; }
  const Tolerance& tolerance() const noexcept { return tolerance_; }
  const PassageTimes& times() const noexcept { return times_; }

  bool reachable(VertexId v) const { return times_.reached(v); }
  /// Directed optimal predecessors of v, ascending by id.
  std::span<const VertexId> predecessors(VertexId v) const { return slice(pred_off_, pred_, v); }
  std::span<const VertexId> successors(VertexId v) const { return slice(succ_off_, succ_, v); }
  /// Level neighbours of v (tight in both directions), ascending by id.
  std::span<const VertexId> level_neighbors(VertexId v) const { return slice(level_off_, level_, v); }
  /// Number of optimal predecessors of v counting level neighbours.
  std::size_t optimal_predecessor_count(VertexId v) const {
    return predecessors(v).size() + level_neighbors(v).size();
  }
  bool has_level_edges() const noexcept { return !level_.empty(); }

  std::int32_t cluster_of(VertexId v) const { return cluster_[static_cast<std::size_t>(v)]; }
  /// Reachable clusters in topological order; members ascending by id.
  std::size_t cluster_count() const noexcept { return cluster_off_.empty() ? 0 : cluster_off_.size() - 1; }
  std::span<const VertexId> cluster_members(std::size_t c) const {
    return {cluster_members_.data() + cluster_off_[c], cluster_off_[c + 1] - cluster_off_[c]};
  }
  /// Breadth-first parent of v inside its cluster, rooted at the cluster's
  /// entry vertices (the source or vertices with directed predecessors);
  /// kNoVertex for entry vertices.
  VertexId cluster_parent(VertexId v) const { return cluster_parent_[static_cast<std::size_t>(v)]; }

 private:
  friend GeodesicDag build_geodesic_dag(const PassageTimes&, const WeightField&, Tolerance);
  static std::span<const VertexId> slice(const std::vector<std::size_t>& off,
                                         const std::vector<VertexId>& data, VertexId v) {
    const auto i = static_cast<std::size_t>(v);
    return {data.data() + off[i], off[i + 1] - off[i]};
  }

  BoxPtr box_;
  VertexId source_ = kNoVertex;
  Tolerance tolerance_;
  PassageTimes times_;
  std::vector<std::size_t> pred_off_, succ_off_, level_off_;
  std::vector<VertexId> pred_, succ_, level_;
  std::vector<std::int32_t> cluster_;
  std::vector<std::size_t> cluster_off_;
  std::vector<VertexId> cluster_members_;
  std::vector<VertexId> cluster_parent_;
};

/// Throws std::invalid_argument on negative tolerance or when times were
/// not computed from this field's box, and Error on a directed cycle.
GeodesicDag build_geodesic_dag(const PassageTimes& times, const WeightField& field,
                               Tolerance tolerance);
/// shortest_paths followed by build_geodesic_dag at the mode's default tolerance.
GeodesicDag geodesic_dag(const WeightField& field, const Coord& source,
                         const ShortestPathOptions& options = {});

inline constexpr std::uint64_t kCountSaturation = (std::uint64_t{1} << 63) - 1;

struct PathCount {
  std::uint64_t value = 0;
  bool saturated = false;
};

struct PathStats {
  VertexId target = kNoVertex;
  PathCount count;
  std::int64_t min_len = 0;
  std::int64_t max_len = 0;
  /// Present when a heavy threshold was supplied.
  std::optional<std::int64_t> min_heavy;
  /// Present when exact counting was requested.
  std::optional<boost::multiprecision::cpp_int> exact_count;
};

struct DagStatsOptions {
  std::optional<double> heavy_threshold;
  bool exact_counts = false;
  /// Budget on in-cluster path-extension steps (zero-weight clusters only).
  std::uint64_t cluster_step_budget = 20'000'000;
};

/// Path counts, extremal lengths and heavy minima for every vertex of the
/// DAG, by one pass over clusters in topological order.
class DagStatistics {
 public:
  DagStatistics(const GeodesicDag& dag, const WeightField& field, DagStatsOptions options = {});

  /// Throws UnreachableTarget.
  PathStats at(VertexId target) const;
  PathStats at(const Coord& target) const { return at(box_->vertex_id(target)); }

 private:
  struct Agg {
    std::uint64_t count = 0;
    bool saturated = false;
    std::int64_t min_len = std::numeric_limits<std::int64_t>::max();
    std::int64_t max_len = -1;
    std::int64_t min_heavy = std::numeric_limits<std::int64_t>::max();
  };
  BoxPtr box_;
  DagStatsOptions options_;
  std::vector<Agg> agg_;
  std::vector<boost::multiprecision::cpp_int> exact_;
};

/// Saturating count of source -> target optimal paths.
PathCount count_optimal_paths(const GeodesicDag& dag, const WeightField& field, const Coord& target);
/// (min_len, max_len) over source -> target optimal paths.
std::pair<std::int64_t, std::int64_t> extremal_path_lengths(const GeodesicDag& dag,
                                                            const WeightField& field,
                                                            const Coord& target);
/// min over optimal paths of the number of edges with weight >= threshold.
std::int64_t min_heavy_edges(const GeodesicDag& dag, const WeightField& field,
                             const Coord& target, double threshold);

/// Number of offsets i such that the `window` consecutive edges starting at
/// edge i of the path all have weight >= alpha2. Zero when window exceeds
/// the path length.
std::int64_t count_heavy_windows(std::span<const VertexId> path, const WeightField& field,
                                 std::int64_t window, double alpha2);

/// The deterministic optimal path source -> target: at each vertex take the
/// smallest-id directed predecessor; inside a zero-weight cluster follow a
/// fixed breadth-first tree towards the cluster's entry vertices. Throws
/// UnreachableTarget.
std::vector<VertexId> canonical_path(const GeodesicDag& dag, VertexId target);

/// Every optimal path source -> target in a fixed order, at most `limit`
/// of them (a test and oracle-comparison utility).
std::vector<std::vector<VertexId>> enumerate_optimal_paths(const GeodesicDag& dag, VertexId target,
                                                           std::size_t limit = 1'000'000);

}  // namespace fpp
