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

#include "fpp/geodesics.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "fpp/error.hpp"

namespace fpp {

std::int64_t Ray::index_of(VertexId v) const {
  const auto it = std::find(vertices.begin(), vertices.end(), v);
  return it == vertices.end() ? 0 : static_cast<std::int64_t>(it - vertices.begin()) + 1;
}

std::vector<Ray> boundary_rays(const GeodesicDag& dag) {
  std::vector<Ray> rays;
  for (VertexId w : dag.box().boundary_vertices()) {
    if (!dag.reachable(w)) continue;
    rays.push_back({dag.source(), canonical_path(dag, w)});
  }
  return rays;
}

AvoidResult exists_avoiding_optimal_path(const GeodesicDag& dag, VertexId target, const AvoidQuery& query) {
  const Box& box = dag.box();
  if (!dag.reachable(target)) {
    throw UnreachableTarget("target " + box.coord(target).to_string() + " is not reachable in the geodesic DAG");
  }
  const std::size_t n = box.vertex_count();
  std::vector<char> blocked(n, 0);
  for (VertexId v : query.forbidden_vertices) {
    if (v == target || v == dag.source()) {
      throw std::invalid_argument("exists_avoiding_optimal_path: source and target must not be forbidden");
    }
    blocked[static_cast<std::size_t>(v)] = 1;
  }
  std::vector<EdgeId> banned = query.forbidden_edges;
  std::sort(banned.begin(), banned.end());
  auto edge_ok = [&](VertexId u, VertexId v) {
    return banned.empty() || !std::binary_search(banned.begin(), banned.end(), box.edge_between(u, v));
  };

  // Backward breadth-first search over tight steps; the BFS tree path is
  // simple, hence an optimal path.
  std::vector<VertexId> next_hop(n, kNoVertex);
  std::vector<char> seen(n, 0);
  std::queue<VertexId> q;
  q.push(target);
  seen[static_cast<std::size_t>(target)] = 1;
  bool found = target == dag.source();
  while (!q.empty() && !found) {
    const VertexId v = q.front();
    q.pop();
    auto visit = [&](VertexId u) {
      const auto ui = static_cast<std::size_t>(u);
      if (found || seen[ui] || blocked[ui] || !edge_ok(u, v)) return;
      seen[ui] = 1;
      next_hop[ui] = v;
      if (u == dag.source()) {
        found = true;
        return;
      }
      q.push(u);
    };
    for (VertexId u : dag.predecessors(v)) visit(u);
    for (VertexId u : dag.level_neighbors(v)) visit(u);
  }
  AvoidResult r;
  r.exists = found;
  if (found) {
    for (VertexId v = dag.source(); v != kNoVertex; v = next_hop[static_cast<std::size_t>(v)]) r.witness.push_back(v);
  }
  return r;
}

std::string SStatistic::to_string() const {
  switch (kind) {
    case SKind::none: return "none";
    case SKind::finite: return std::to_string(value);
    case SKind::horizon: return "horizon";
  }
  return "none";
}

SStatistic s_statistic(std::span<const std::int64_t> bad_indices, std::int64_t ray_length) {
  if (bad_indices.empty()) return {SKind::none, 0};
  const std::int64_t m = *std::max_element(bad_indices.begin(), bad_indices.end());
  if (m * 10 > ray_length * 9) return {SKind::horizon, m};
  return {SKind::finite, m};
}

BadPointReport bad_indices(const Ray& ray, const GeodesicDag& probe_dag, const WeightField& field,
                           BadnessMode mode) {
  if (ray.vertices.empty()) throw std::invalid_argument("bad_indices: empty ray");
  if (!(probe_dag.box() == field.box())) throw std::invalid_argument("bad_indices: DAG and field boxes differ");
  BadPointReport rep;
  rep.ray = ray;
  rep.probe_source = probe_dag.source();
  const std::int64_t probe_index = ray.index_of(probe_dag.source());
  rep.degenerate = probe_index >= 2;

  std::optional<DagStatistics> stats;
  if (mode == BadnessMode::unique) stats.emplace(probe_dag, field);
  std::vector<VertexId> ray_sorted = ray.vertices;
  std::sort(ray_sorted.begin(), ray_sorted.end());

  for (std::int64_t i = 2; i <= ray.length(); ++i) {
    const VertexId x = ray.at(i);
    if (x == probe_dag.source()) {
      // The trivial path {x} meets the ray only at x.
      rep.bad_indices.push_back(i);
      rep.witnesses.push_back({x});
      continue;
    }
    if (mode == BadnessMode::unique) {
      const PathStats s = stats->at(x);
      if (s.count.value != 1 || s.count.saturated) {
        throw NonUniqueGeodesic("bad_indices: optimal path to ray index " + std::to_string(i) + " is not unique");
      }
      std::vector<VertexId> path = canonical_path(probe_dag, x);
      const bool meets_only_x = std::none_of(path.begin(), path.end() - 1, [&](VertexId v) {
        return std::binary_search(ray_sorted.begin(), ray_sorted.end(), v);
      });
      if (meets_only_x) {
        rep.bad_indices.push_back(i);
        rep.witnesses.push_back(std::move(path));
      }
      continue;
    }
    if (probe_index > 0) continue;  // every path from the probe meets the ray at the probe
    AvoidQuery q;
    q.forbidden_vertices.reserve(ray.vertices.size());
    for (VertexId v : ray.vertices) {
      if (v != x) q.forbidden_vertices.push_back(v);
    }
    AvoidResult r = exists_avoiding_optimal_path(probe_dag, x, q);
    if (r.exists) {
      rep.bad_indices.push_back(i);
      rep.witnesses.push_back(std::move(r.witness));
    }
  }
  rep.s = s_statistic(rep.bad_indices, ray.length());
  return rep;
}

RKStatistics rk_statistics(std::span<const BadPointReport> reports, const PassageTimes& probe_times) {
  RKStatistics out;
  if (reports.empty()) return out;
  // Order: none (S = 0) < finite < horizon.
  auto rank = [](const SStatistic& s) {
    return std::pair<int, std::int64_t>{s.kind == SKind::none ? 0 : s.kind == SKind::finite ? 1 : 2, s.value};
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (rank(reports[i].s) < rank(reports[best].s)) best = i;
  }
  out.r = reports[best].s;
  out.ray = static_cast<std::int64_t>(best);
  if (out.r.kind != SKind::finite) return out;
  for (const BadPointReport& rep : reports) {
    if (!(rep.s == out.r)) continue;
    const double t = probe_times.time(rep.ray.at(out.r.value));
    out.k = out.k ? std::min(*out.k, t) : t;
  }
  return out;
}

std::string to_string(Coalescence c) {
  switch (c) {
    case Coalescence::coalesce: return "coalesce";
    case Coalescence::distinct: return "distinct";
    case Coalescence::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

CoalescenceVerdict classify_coalescence(const Box& box, const Ray& r1, const Ray& r2, std::int64_t horizon) {
  if (horizon < 0 || horizon >= box.radius()) {
    throw std::invalid_argument("classify_coalescence: horizon must lie in [0, box radius)");
  }
  if (r1.vertices.empty() || r2.vertices.empty()) throw std::invalid_argument("classify_coalescence: empty ray");
  const Coord s1 = box.coord(r1.vertices.front());
  const Coord s2 = box.coord(r2.vertices.front());
  std::vector<VertexId> b = r2.vertices;
  std::sort(b.begin(), b.end());
  std::vector<VertexId> a = r1.vertices;
  std::sort(a.begin(), a.end());
  std::vector<VertexId> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  CoalescenceVerdict v;
  v.horizon = horizon;
  for (VertexId x : common) {
    const Coord c = box.coord(x);
    if (lattice_metrics(c, s1).linf > horizon && lattice_metrics(c, s2).linf > horizon) ++v.shared_beyond_horizon;
  }
  v.shared_terminal = r1.terminal() == r2.terminal();
  if (v.shared_beyond_horizon == 0) {
    v.verdict = Coalescence::distinct;
  } else if (v.shared_terminal) {
    v.verdict = Coalescence::coalesce;
  } else {
    v.verdict = Coalescence::indeterminate;
  }
  return v;
}

}  // namespace fpp
