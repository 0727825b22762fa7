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

#include "fpp/fpt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "fpp/error.hpp"

namespace fpp {

bool PassageTimes::reached(VertexId v) const {
  const auto i = static_cast<std::size_t>(v);
  return mode_ == WeightMode::exact ? exact_[i] != kUnreachedExact : std::isfinite(float_[i]);
}

double PassageTimes::time(VertexId v) const {
  const auto i = static_cast<std::size_t>(v);
  if (mode_ == WeightMode::floating) return float_[i];
  if (exact_[i] == kUnreachedExact) return std::numeric_limits<double>::infinity();
  return std::ldexp(static_cast<double>(exact_[i]), -grid_exponent_);
}

std::int64_t PassageTimes::exact_time(VertexId v) const {
  if (mode_ != WeightMode::exact) throw std::logic_error("exact_time() requires exact-mode passage times");
  return exact_[static_cast<std::size_t>(v)];
}

bool PassageTimes::at_least(VertexId v, double x) const {
  const auto i = static_cast<std::size_t>(v);
  if (mode_ == WeightMode::floating) return float_[i] >= x;
  if (exact_[i] == kUnreachedExact) return true;
  return static_cast<long double>(exact_[i]) >= std::ldexp(static_cast<long double>(x), grid_exponent_);
}

namespace {

template <class T>
struct Arith;

template <>
struct Arith<std::int64_t> {
  static constexpr std::int64_t infinity() { return kUnreachedExact; }
  static std::int64_t weight(const WeightField& f, EdgeId e) { return f.numerators()[static_cast<std::size_t>(e)]; }
  static std::int64_t from_real(double x, int g) {
    // Largest numerator n with n * 2^-g <= x.
    return static_cast<std::int64_t>(std::floor(std::ldexp(static_cast<long double>(x), g)));
  }
};

template <>
struct Arith<double> {
  static constexpr double infinity() { return std::numeric_limits<double>::infinity(); }
  static double weight(const WeightField& f, EdgeId e) { return f.values()[static_cast<std::size_t>(e)]; }
  static double from_real(double x, int) { return x; }
};

template <class T>
std::vector<T> dijkstra(const WeightField& field, VertexId source, const ShortestPathOptions& opt,
                        double slack) {
  const Box& box = field.box();
  const std::size_t n = box.vertex_count();
  std::vector<T> dist(n, Arith<T>::infinity());
  std::vector<char> settled(n, 0);
  using Item = std::pair<T, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[static_cast<std::size_t>(source)] = 0;
  heap.emplace(T{0}, source);

  std::optional<T> cutoff;
  if (opt.cutoff) cutoff = Arith<T>::from_real(*opt.cutoff, field.grid_exponent());
  std::vector<char> is_target(opt.targets.empty() ? 0 : n, 0);
  std::size_t targets_left = 0;
  for (VertexId t : opt.targets) {
    if (t < 0 || static_cast<std::size_t>(t) >= n) throw std::out_of_range("shortest_paths: target outside the box");
    if (!is_target[static_cast<std::size_t>(t)]) {
      is_target[static_cast<std::size_t>(t)] = 1;
      ++targets_left;
    }
  }
  std::optional<T> stop_above;

  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    const auto ui = static_cast<std::size_t>(u);
    if (settled[ui] || d != dist[ui]) continue;
    if (cutoff && d > *cutoff) break;
    if (stop_above && d > *stop_above) break;
    settled[ui] = 1;
    if (targets_left > 0 && is_target[ui] && --targets_left == 0) {
      // Keep settling vertices tied with the last target.
      if constexpr (std::is_same_v<T, double>) {
        stop_above = d + slack * (1 + d);
      } else {
        stop_above = d;
      }
    }
    for (const Incidence& inc : box.incident(u)) {
      const auto wi = static_cast<std::size_t>(inc.vertex);
      if (settled[wi]) continue;
      const T cand = d + Arith<T>::weight(field, inc.edge);
      if (cand < dist[wi]) {
        dist[wi] = cand;
        heap.emplace(cand, inc.vertex);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!settled[i]) dist[i] = Arith<T>::infinity();
  }
  return dist;
}

}  // namespace

PassageTimes shortest_paths(const WeightField& field, VertexId source, const ShortestPathOptions& options) {
  if (source < 0 || static_cast<std::size_t>(source) >= field.box().vertex_count()) {
    throw std::out_of_range("shortest_paths: source outside the box");
  }
  PassageTimes pt;
  pt.box_ = field.box_ptr();
  pt.source_ = source;
  pt.mode_ = field.mode();
  pt.grid_exponent_ = field.grid_exponent();
  if (field.mode() == WeightMode::exact) {
    pt.exact_ = dijkstra<std::int64_t>(field, source, options, 0);
  } else {
    const Tolerance tol = Tolerance::floating_default();
    pt.float_ = dijkstra<double>(field, source, options, std::max(tol.absolute, tol.relative));
  }
  return pt;
}

PassageTimes shortest_paths(const WeightField& field, const Coord& source, const ShortestPathOptions& options) {
  return shortest_paths(field, field.box().vertex_id(source), options);
}

namespace {

EdgeId step_edge(const Box& box, VertexId u, VertexId v) {
  const EdgeId e = box.edge_between(u, v);
  if (e == kNoEdge) {
    throw std::invalid_argument("path steps between non-adjacent vertices " + box.coord(u).to_string() +
                                " and " + box.coord(v).to_string());
  }
  return e;
}

}  // namespace

double path_weight(const WeightField& field, std::span<const VertexId> path) {
  double s = 0;
  for (std::size_t i = 1; i < path.size(); ++i) s += field.weight(step_edge(field.box(), path[i - 1], path[i]));
  return s;
}

std::int64_t path_weight_exact(const WeightField& field, std::span<const VertexId> path) {
  std::int64_t s = 0;
  for (std::size_t i = 1; i < path.size(); ++i) s += field.numerator(step_edge(field.box(), path[i - 1], path[i]));
  return s;
}

bool is_optimal_path(const WeightField& field, std::span<const VertexId> path) {
  if (path.empty()) return false;
  ShortestPathOptions opt;
  opt.targets = {path.back()};
  const PassageTimes pt = shortest_paths(field, path.front(), opt);
  if (field.mode() == WeightMode::exact) return path_weight_exact(field, path) == pt.exact_time(path.back());
  const Tolerance tol = Tolerance::floating_default();
  const double t = pt.time(path.back());
  return path_weight(field, path) <= t + tol.absolute + tol.relative * t;
}

namespace {

template <class T>
struct TightTest {
  std::span<const T> t;
  Tolerance tol;
  const WeightField* field;
  bool operator()(VertexId u, VertexId v, EdgeId e) const {
    const T tu = t[static_cast<std::size_t>(u)];
    const T tv = t[static_cast<std::size_t>(v)];
    if constexpr (std::is_same_v<T, double>) {
      return tu + Arith<T>::weight(*field, e) <= tv + tol.absolute + tol.relative * tv;
    } else {
      // Exact mode ignores any tolerance: arithmetic is exact.
      return tu + Arith<T>::weight(*field, e) <= tv;
    }
  }
};

struct UnionFind {
  std::vector<std::int32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::int32_t find(std::int32_t x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

void to_csr(std::vector<std::vector<VertexId>>& lists, std::vector<std::size_t>& off, std::vector<VertexId>& data) {
  off.assign(lists.size() + 1, 0);
  for (std::size_t i = 0; i < lists.size(); ++i) off[i + 1] = off[i] + lists[i].size();
  data.clear();
  data.reserve(off.back());
  for (auto& l : lists) {
    std::sort(l.begin(), l.end());
    data.insert(data.end(), l.begin(), l.end());
  }
}

}  // namespace

GeodesicDag build_geodesic_dag(const PassageTimes& times, const WeightField& field, Tolerance tolerance) {
  if (!(tolerance.absolute >= 0 && tolerance.relative >= 0) || !std::isfinite(tolerance.absolute) ||
      !std::isfinite(tolerance.relative)) {
    throw std::invalid_argument("geodesic DAG tolerance must be finite and non-negative");
  }
  if (!(times.box() == field.box()) || times.mode() != field.mode()) {
    throw std::invalid_argument("passage times were computed on a different box or weight mode");
  }
  const Box& box = field.box();
  const std::size_t n = box.vertex_count();
  std::vector<std::vector<VertexId>> preds(n), succs(n), level(n);

  auto scan = [&](auto tight) {
    for (std::size_t vi = 0; vi < n; ++vi) {
      const auto v = static_cast<VertexId>(vi);
      if (!times.reached(v)) continue;
      for (const Incidence& inc : box.incident(v)) {
        const VertexId u = inc.vertex;
        if (!times.reached(u) || !tight(u, v, inc.edge)) continue;
        if (tight(v, u, inc.edge)) {
          level[vi].push_back(u);
        } else {
          preds[vi].push_back(u);
          succs[static_cast<std::size_t>(u)].push_back(v);
        }
      }
    }
  };
  if (field.mode() == WeightMode::exact) {
    scan(TightTest<std::int64_t>{times.exact_times(), tolerance, &field});
  } else {
    scan(TightTest<double>{times.float_times(), tolerance, &field});
  }

  GeodesicDag dag;
  dag.box_ = field.box_ptr();
  dag.source_ = times.source();
  dag.tolerance_ = tolerance;
  dag.times_ = times;

  // Contract level edges into clusters.
  UnionFind uf(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (VertexId u : level[v]) uf.unite(static_cast<std::int32_t>(v), u);
  }
  dag.cluster_.assign(n, -1);
  std::vector<std::int32_t> root_to_cluster(n, -1);
  std::vector<std::vector<VertexId>> members;
  for (std::size_t v = 0; v < n; ++v) {
    if (!times.reached(static_cast<VertexId>(v))) continue;
    const std::int32_t r = uf.find(static_cast<std::int32_t>(v));
    auto& slot = root_to_cluster[static_cast<std::size_t>(r)];
    if (slot < 0) {
      slot = static_cast<std::int32_t>(members.size());
      members.emplace_back();
    }
    members[static_cast<std::size_t>(slot)].push_back(static_cast<VertexId>(v));
    dag.cluster_[v] = slot;
  }

  // Topological order of clusters (Kahn), ties broken by smallest member.
  const std::size_t c = members.size();
  std::vector<std::int64_t> indegree(c, 0);
  for (std::size_t v = 0; v < n; ++v) {
    for (VertexId w : succs[v]) {
      if (dag.cluster_[v] == dag.cluster_[static_cast<std::size_t>(w)]) {
        throw Error("geodesic DAG: directed tight edge inside a level cluster");
      }
      ++indegree[static_cast<std::size_t>(dag.cluster_[static_cast<std::size_t>(w)])];
    }
  }
  std::priority_queue<std::int32_t, std::vector<std::int32_t>, std::greater<>> ready;
  for (std::size_t k = 0; k < c; ++k) {
    if (indegree[k] == 0) ready.push(static_cast<std::int32_t>(k));
  }
  std::vector<std::int32_t> order;
  order.reserve(c);
  while (!ready.empty()) {
    const std::int32_t k = ready.top();
    ready.pop();
    order.push_back(k);
    for (VertexId v : members[static_cast<std::size_t>(k)]) {
      for (VertexId w : succs[static_cast<std::size_t>(v)]) {
        const auto kw = static_cast<std::size_t>(dag.cluster_[static_cast<std::size_t>(w)]);
        if (--indegree[kw] == 0) ready.push(static_cast<std::int32_t>(kw));
      }
    }
  }
  if (order.size() != c) throw Error("geodesic DAG: tight edges contain a directed cycle");

  std::vector<std::int32_t> rank(c);
  for (std::size_t i = 0; i < c; ++i) rank[static_cast<std::size_t>(order[i])] = static_cast<std::int32_t>(i);
  dag.cluster_off_.assign(c + 1, 0);
  for (std::size_t i = 0; i < c; ++i) dag.cluster_off_[i + 1] = dag.cluster_off_[i] + members[static_cast<std::size_t>(order[i])].size();
  dag.cluster_members_.reserve(dag.cluster_off_.back());
  for (std::size_t i = 0; i < c; ++i) {
    const auto& m = members[static_cast<std::size_t>(order[i])];
    dag.cluster_members_.insert(dag.cluster_members_.end(), m.begin(), m.end());
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (dag.cluster_[v] >= 0) dag.cluster_[v] = rank[static_cast<std::size_t>(dag.cluster_[v])];
  }

  // Breadth-first trees inside non-trivial clusters.
  dag.cluster_parent_.assign(n, kNoVertex);
  std::vector<char> seen(n, 0);
  for (std::size_t k = 0; k < c; ++k) {
    const auto span = dag.cluster_members(k);
    if (span.size() < 2) continue;
    std::queue<VertexId> q;
    for (VertexId v : span) {
      if (v == dag.source_ || !preds[static_cast<std::size_t>(v)].empty()) {
        seen[static_cast<std::size_t>(v)] = 1;
        q.push(v);
      }
    }
    while (!q.empty()) {
      const VertexId v = q.front();
      q.pop();
      std::vector<VertexId> nb = level[static_cast<std::size_t>(v)];
      std::sort(nb.begin(), nb.end());
      for (VertexId w : nb) {
        if (seen[static_cast<std::size_t>(w)]) continue;
        seen[static_cast<std::size_t>(w)] = 1;
        dag.cluster_parent_[static_cast<std::size_t>(w)] = v;
        q.push(w);
      }
    }
  }

  to_csr(preds, dag.pred_off_, dag.pred_);
  to_csr(succs, dag.succ_off_, dag.succ_);
  to_csr(level, dag.level_off_, dag.level_);
  return dag;
}

GeodesicDag geodesic_dag(const WeightField& field, const Coord& source, const ShortestPathOptions& options) {
  return build_geodesic_dag(shortest_paths(field, source, options), field, Tolerance::for_mode(field.mode()));
}

namespace {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b, bool& saturated) {
  if (a > kCountSaturation - b) {
    saturated = true;
    return kCountSaturation;
  }
  return a + b;
}

}  // namespace

DagStatistics::DagStatistics(const GeodesicDag& dag, const WeightField& field, DagStatsOptions options)
    : box_(dag.box_ptr()), options_(options) {
  if (!(dag.box() == field.box())) throw std::invalid_argument("DagStatistics: field and DAG boxes differ");
  const Box& box = *box_;
  const std::size_t n = box.vertex_count();
  agg_.assign(n, Agg{});
  if (options_.exact_counts) exact_.assign(n, 0);
  const bool track_heavy = options_.heavy_threshold.has_value();
  auto heavy = [&](VertexId u, VertexId v) -> std::int64_t {
    if (!track_heavy) return 0;
    return field.at_least(box.edge_between(u, v), *options_.heavy_threshold) ? 1 : 0;
  };
  auto merge = [](Agg& into, const Agg& from, std::int64_t dlen, std::int64_t dheavy) {
    if (from.count == 0 && !from.saturated) return;
    into.count = sat_add(into.count, from.count, into.saturated);
    into.saturated = into.saturated || from.saturated;
    into.min_len = std::min(into.min_len, from.min_len + dlen);
    into.max_len = std::max(into.max_len, from.max_len + dlen);
    into.min_heavy = std::min(into.min_heavy, from.min_heavy + dheavy);
  };
  auto entry_of = [&](VertexId v, Agg& a, boost::multiprecision::cpp_int* ex) {
    if (v == dag.source()) {
      a.count = 1;
      a.min_len = a.max_len = 0;
      a.min_heavy = 0;
      if (ex) *ex = 1;
    }
    for (VertexId u : dag.predecessors(v)) {
      merge(a, agg_[static_cast<std::size_t>(u)], 1, heavy(u, v));
      if (ex) *ex += exact_[static_cast<std::size_t>(u)];
    }
  };

  std::vector<char> on_path(n, 0);
  std::uint64_t steps = 0;
  for (std::size_t k = 0; k < dag.cluster_count(); ++k) {
    const auto members = dag.cluster_members(k);
    if (members.size() == 1) {
      const VertexId v = members[0];
      entry_of(v, agg_[static_cast<std::size_t>(v)],
               options_.exact_counts ? &exact_[static_cast<std::size_t>(v)] : nullptr);
      continue;
    }
    // Zero-weight cluster: extend every entry aggregate along each simple
    // path of level edges.
    std::vector<Agg> entries(members.size());
    std::vector<boost::multiprecision::cpp_int> exact_entries(options_.exact_counts ? members.size() : 0);
    for (std::size_t i = 0; i < members.size(); ++i) {
      entry_of(members[i], entries[i], options_.exact_counts ? &exact_entries[i] : nullptr);
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      const Agg& base = entries[i];
      if (base.count == 0 && !base.saturated) continue;
      struct Frame {
        VertexId v;
        std::size_t next;
        std::int64_t len;
        std::int64_t heavy;
      };
      std::vector<Frame> stack{{members[i], 0, 0, 0}};
      on_path[static_cast<std::size_t>(members[i])] = 1;
      merge(agg_[static_cast<std::size_t>(members[i])], base, 0, 0);
      if (options_.exact_counts) exact_[static_cast<std::size_t>(members[i])] += exact_entries[i];
      while (!stack.empty()) {
        Frame& top = stack.back();
        const auto nb = dag.level_neighbors(top.v);
        if (top.next == nb.size()) {
          on_path[static_cast<std::size_t>(top.v)] = 0;
          stack.pop_back();
          continue;
        }
        const VertexId w = nb[top.next++];
        if (on_path[static_cast<std::size_t>(w)] || w == dag.source()) continue;
        if (++steps > options_.cluster_step_budget) {
          throw Error("DagStatistics: zero-weight cluster path enumeration exceeded its step budget");
        }
        const std::int64_t len = top.len + 1;
        const std::int64_t hv = top.heavy + heavy(top.v, w);
        merge(agg_[static_cast<std::size_t>(w)], base, len, hv);
        if (options_.exact_counts) exact_[static_cast<std::size_t>(w)] += exact_entries[i];
        on_path[static_cast<std::size_t>(w)] = 1;
        stack.push_back({w, 0, len, hv});
      }
    }
  }
}

PathStats DagStatistics::at(VertexId target) const {
  if (target < 0 || static_cast<std::size_t>(target) >= agg_.size()) {
    throw std::out_of_range("DagStatistics: target outside the box");
  }
  const Agg& a = agg_[static_cast<std::size_t>(target)];
  if (a.count == 0 && !a.saturated) {
    throw UnreachableTarget("target " + box_->coord(target).to_string() + " is not reachable in the geodesic DAG");
  }
  PathStats s;
  s.target = target;
  s.count = {a.count, a.saturated};
  s.min_len = a.min_len;
  s.max_len = a.max_len;
  if (options_.heavy_threshold) s.min_heavy = a.min_heavy;
  if (options_.exact_counts) s.exact_count = exact_[static_cast<std::size_t>(target)];
  return s;
}

PathCount count_optimal_paths(const GeodesicDag& dag, const WeightField& field, const Coord& target) {
  return DagStatistics(dag, field).at(target).count;
}

std::pair<std::int64_t, std::int64_t> extremal_path_lengths(const GeodesicDag& dag, const WeightField& field,
                                                            const Coord& target) {
  const PathStats s = DagStatistics(dag, field).at(target);
  return {s.min_len, s.max_len};
}

std::int64_t min_heavy_edges(const GeodesicDag& dag, const WeightField& field, const Coord& target,
                             double threshold) {
  DagStatsOptions opt;
  opt.heavy_threshold = threshold;
  return *DagStatistics(dag, field, opt).at(target).min_heavy;
}

std::int64_t count_heavy_windows(std::span<const VertexId> path, const WeightField& field, std::int64_t window,
                                 double alpha2) {
  if (window <= 0) throw std::invalid_argument("count_heavy_windows: window must be positive");
  const auto edges = static_cast<std::int64_t>(path.empty() ? 0 : path.size() - 1);
  if (window > edges) return 0;
  std::int64_t run = 0;
  std::int64_t count = 0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const EdgeId e = step_edge(field.box(), path[i - 1], path[i]);
    run = field.at_least(e, alpha2) ? run + 1 : 0;
    if (run >= window) ++count;
  }
  return count;
}

std::vector<VertexId> canonical_path(const GeodesicDag& dag, VertexId target) {
  if (!dag.reachable(target)) {
    throw UnreachableTarget("target " + dag.box().coord(target).to_string() + " is not reachable in the geodesic DAG");
  }
  std::vector<VertexId> path{target};
  VertexId v = target;
  while (v != dag.source()) {
    const auto preds = dag.predecessors(v);
    const VertexId next = preds.empty() ? dag.cluster_parent(v) : preds.front();
    if (next == kNoVertex) throw Error("canonical_path: broken predecessor chain");
    v = next;
    path.push_back(v);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<std::vector<VertexId>> enumerate_optimal_paths(const GeodesicDag& dag, VertexId target,
                                                           std::size_t limit) {
  if (!dag.reachable(target)) {
    throw UnreachableTarget("target " + dag.box().coord(target).to_string() + " is not reachable in the geodesic DAG");
  }
  std::vector<std::vector<VertexId>> out;
  std::vector<VertexId> stack{target};
  std::vector<char> on_path(dag.box().vertex_count(), 0);
  on_path[static_cast<std::size_t>(target)] = 1;
  std::function<void(VertexId)> walk = [&](VertexId v) {
    if (out.size() >= limit) return;
    if (v == dag.source()) {
      out.emplace_back(stack.rbegin(), stack.rend());
      return;
    }
    auto visit = [&](VertexId u) {
      if (on_path[static_cast<std::size_t>(u)]) return;
      on_path[static_cast<std::size_t>(u)] = 1;
      stack.push_back(u);
      walk(u);
      stack.pop_back();
      on_path[static_cast<std::size_t>(u)] = 0;
    };
    for (VertexId u : dag.predecessors(v)) visit(u);
    for (VertexId u : dag.level_neighbors(v)) visit(u);
  };
  walk(target);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fpp
