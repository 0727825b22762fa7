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

#include "fpp/oracle.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace fpp {

std::int64_t EnumerationResult::min_len() const {
  std::int64_t m = std::numeric_limits<std::int64_t>::max();
  for (const auto& p : paths) m = std::min(m, static_cast<std::int64_t>(p.size()) - 1);
  return m;
}

std::int64_t EnumerationResult::max_len() const {
  std::int64_t m = -1;
  for (const auto& p : paths) m = std::max(m, static_cast<std::int64_t>(p.size()) - 1);
  return m;
}

std::int64_t EnumerationResult::min_heavy(const WeightField& field, double threshold) const {
  std::int64_t m = std::numeric_limits<std::int64_t>::max();
  for (const auto& p : paths) {
    std::int64_t h = 0;
    for (std::size_t i = 1; i < p.size(); ++i) {
      if (field.weight(field.box().edge_between(p[i - 1], p[i])) >= threshold) ++h;
    }
    m = std::min(m, h);
  }
  return m;
}

namespace {

/// Weight of the staircase path that fixes coordinates in axis order: an
/// upper bound on t(a, b) that seeds the branch and bound.
std::int64_t staircase_weight(const WeightField& field, VertexId a, VertexId b) {
  const Box& box = field.box();
  Coord cur = box.coord(a);
  const Coord end = box.coord(b);
  std::int64_t w = 0;
  for (int axis = 0; axis < cur.dimension(); ++axis) {
    while (cur[axis] != end[axis]) {
      Coord next = cur;
      next[axis] += end[axis] > cur[axis] ? 1 : -1;
      w += field.numerator(box.edge_between(box.vertex_id(cur), box.vertex_id(next)));
      cur = next;
    }
  }
  return w;
}

}  // namespace

EnumerationResult brute_force(const WeightField& field, VertexId a, VertexId b, std::int64_t length_cap,
                              bool allow_large) {
  if (field.mode() != WeightMode::exact) throw std::invalid_argument("brute_force: exact-mode fields only");
  const Box& box = field.box();
  if (box.radius() > 3 && !allow_large) throw std::invalid_argument("brute_force: box radius above 3");
  const Coord ca = box.coord(a);
  const Coord cb = box.coord(b);
  if (length_cap < lattice_metrics(ca, cb).l1) throw std::invalid_argument("brute_force: length cap below |a-b|_1");

  std::int64_t min_w = std::numeric_limits<std::int64_t>::max();
  for (std::int64_t n : field.numerators()) min_w = std::min(min_w, n);
  if (field.edge_count() == 0) min_w = 0;

  EnumerationResult res;
  res.a = a;
  res.b = b;
  std::int64_t best = staircase_weight(field, a, b);
  std::int64_t truncated_min = std::numeric_limits<std::int64_t>::max();

  std::vector<char> on_path(box.vertex_count(), 0);
  std::vector<VertexId> path{a};
  on_path[static_cast<std::size_t>(a)] = 1;

  // Iterative depth-first search; frame = (vertex, next incidence, weight).
  struct Frame {
    VertexId v;
    std::size_t next;
    std::int64_t weight;
  };
  std::vector<Frame> stack{{a, 0, 0}};
  if (a == b) {
    res.time = 0;
    res.paths.push_back({a});
    return res;
  }
  while (!stack.empty()) {
    Frame& top = stack.back();
    const auto inc = box.incident(top.v);
    if (top.next == inc.size()) {
      on_path[static_cast<std::size_t>(top.v)] = 0;
      path.pop_back();
      stack.pop_back();
      continue;
    }
    const Incidence step = inc[top.next++];
    if (on_path[static_cast<std::size_t>(step.vertex)]) continue;
    const std::int64_t w = top.weight + field.numerator(step.edge);
    const std::int64_t remaining = lattice_metrics(box.coord(step.vertex), cb).l1;
    if (w + min_w * remaining > best) continue;
    if (step.vertex == b) {
      if (w < best) {
        best = w;
        res.paths.clear();
      }
      path.push_back(b);
      res.paths.push_back(path);
      path.pop_back();
      continue;
    }
    const auto len = static_cast<std::int64_t>(path.size());  // edges after this step
    if (len + remaining > length_cap) {
      truncated_min = std::min(truncated_min, w + min_w * remaining);
      continue;
    }
    on_path[static_cast<std::size_t>(step.vertex)] = 1;
    path.push_back(step.vertex);
    stack.push_back({step.vertex, 0, w});
  }
  // Paths found before `best` settled may be suboptimal.
  std::erase_if(res.paths, [&](const std::vector<VertexId>& p) {
    std::int64_t s = 0;
    for (std::size_t i = 1; i < p.size(); ++i) s += field.numerator(box.edge_between(p[i - 1], p[i]));
    return s != best;
  });
  res.time = best;
  res.partial = truncated_min <= best || res.paths.empty();
  std::sort(res.paths.begin(), res.paths.end());
  return res;
}

std::vector<std::int64_t> oracle_bad_indices(const WeightField& field, std::span<const VertexId> ray, VertexId probe,
                                             std::int64_t length_cap) {
  std::vector<VertexId> sorted(ray.begin(), ray.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::int64_t> bad;
  for (std::size_t i = 1; i < ray.size(); ++i) {
    const VertexId x = ray[i];
    const EnumerationResult r = brute_force(field, probe, x, length_cap, true);
    const bool some_meets_only_x = std::any_of(r.paths.begin(), r.paths.end(), [&](const std::vector<VertexId>& p) {
      return std::none_of(p.begin(), p.end() - 1,
                          [&](VertexId v) { return std::binary_search(sorted.begin(), sorted.end(), v); });
    });
    if (some_meets_only_x) bad.push_back(static_cast<std::int64_t>(i) + 1);
  }
  return bad;
}

}  // namespace fpp
