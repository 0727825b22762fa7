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

#include "fpp/nbox.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>

#include "fpp/error.hpp"

namespace fpp {

namespace {

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
int ceil_div(int a, int b) { return -floor_div(-a, b); }

void check_nbox(const NBox& nb) {
  if (nb.n < 1) throw std::invalid_argument("n-box scale must be >= 1");
  const int d = nb.l.dimension();
  if (nb.j == 0 || nb.j > d || nb.j < -d) throw std::invalid_argument("n-box direction j must be in +-{1..d}");
}

}  // namespace

Cuboid NBox::s() const {
  check_nbox(*this);
  Cuboid c{l, l};
  for (int i = 0; i < l.dimension(); ++i) {
    c.lo[i] = n * l[i];
    c.hi[i] = n * l[i] + n - 1;
  }
  return c;
}

Cuboid NBox::t() const {
  check_nbox(*this);
  Cuboid c{l, l};
  for (int i = 0; i < l.dimension(); ++i) {
    c.lo[i] = n * l[i] - n;
    c.hi[i] = n * l[i] + 2 * n;
  }
  return c;
}

Cuboid NBox::b() const {
  Cuboid c = t();
  const int m = axis();
  if (j > 0) {
    c.lo[m] = n * l[m] + n;
    c.hi[m] = n * l[m] + 2 * n;
  } else {
    c.lo[m] = n * l[m] - n;
    c.hi[m] = n * l[m];
  }
  return c;
}

NBox NBox::canonical() const {
  check_nbox(*this);
  if (j > 0) return *this;
  NBox c = *this;
  c.j = -j;
  c.l[axis()] -= 2;
  return c;
}

std::string NBox::to_string() const {
  return "B^" + std::to_string(j) + "(" + l.to_plain() + ";" + std::to_string(n) + ")";
}

std::pair<std::vector<int>, std::pair<int, int>> NBox::key() const {
  const auto comps = l.components();
  return {std::vector<int>(comps.begin(), comps.end()), {n, j}};
}

RThresholds RThresholds::compute(const Distribution& dist, double r, double delta, std::optional<double> alpha2) {
  if (!(r > 0)) throw std::invalid_argument("RThresholds: R must be positive");
  if (!(delta > 0)) throw std::invalid_argument("RThresholds: delta must be positive");
  const double fm = dist.f_minus();
  const double fp = dist.f_plus();
  const bool bounded = std::isfinite(fp);
  const bool atom_minus = dist.atom_at_f_minus() > 0;
  const bool atom_plus = bounded && dist.atom_at_f_plus() > 0;
  const double inf = std::numeric_limits<double>::infinity();

  RThresholds out;
  out.r = r;
  out.f_minus_r = atom_minus ? fm : fm + 1 / (r * r);
  out.f_plus_r = !bounded ? inf : atom_plus ? fp : fp - 1 / (r * r);

  // Each inequality is either R-free or reads R^-2 < gap (or <= gap).
  double r_min = 0;
  auto need_gap = [&](double gap) {
    if (!(gap > 0)) {
      r_min = inf;
      return;
    }
    r_min = std::max(r_min, 1 / std::sqrt(gap));
  };
  auto need = [&](bool ok) {
    if (!ok) r_min = inf;
  };
  if (!atom_minus) need_gap(delta / 2);
  if (bounded) {
    if (!atom_plus) {
      need_gap(fp - fm - delta / 2);
    } else {
      need(fm + delta / 2 < fp);
    }
  }
  if (alpha2) {
    if (!atom_minus) {
      need_gap(*alpha2 - fm);
    } else {
      need(*alpha2 >= fm);
    }
    if (bounded) {
      if (!atom_plus) {
        need_gap(fp - *alpha2);
      } else {
        need(*alpha2 <= fp);
      }
    }
  }
  out.r_min = r_min;
  return out;
}

bool RThresholds::estimate_holds(const Distribution& dist, double delta, std::optional<double> alpha2) const {
  const double mid = dist.f_minus() + delta / 2;
  bool ok = f_minus_r < mid && mid < f_plus_r;
  if (alpha2) ok = ok && f_minus_r <= *alpha2 && *alpha2 <= f_plus_r;
  return ok;
}

namespace {

struct Region {
  Cuboid t;
  Cuboid b;
  int axis;
  bool in_t(const Coord& c) const { return t.contains(c); }
  bool in_b(const Coord& c) const { return b.contains(c); }
  bool lo_face(const Coord& c) const { return in_b(c) && c[axis] == b.lo[axis]; }
  bool hi_face(const Coord& c) const { return in_b(c) && c[axis] == b.hi[axis]; }
};

Region region_of(const NBox& nb) { return {nb.t(), nb.b(), nb.axis()}; }

/// Crossing automaton: 0 nothing, 1 lo face seen inside T, 2 hi face seen
/// inside T, 3 crossed.
int cross_step(const Region& r, int state, const Coord& c) {
  if (state == 3) return 3;
  if (!r.in_t(c)) return 0;
  if (r.lo_face(c)) return state == 2 ? 3 : 1;
  if (r.hi_face(c)) return state == 1 ? 3 : 2;
  return state;
}

const Distribution& law_of(const WeightField& field, const NBoxTuning& tuning) {
  if (tuning.law) return *tuning.law;
  if (field.distribution()) return *field.distribution();
  throw std::invalid_argument("n-box classification needs the weight law (field has none; set tuning.law)");
}

std::vector<VertexId> members(const Box& box, const Cuboid& c) {
  std::vector<VertexId> out;
  for (std::size_t v = 0; v < box.vertex_count(); ++v) {
    if (c.contains(box.coord(static_cast<VertexId>(v)))) out.push_back(static_cast<VertexId>(v));
  }
  return out;
}

struct BlackResult {
  bool speed_ok = true;
  bool cap_ok = true;
  bool cap_dropped = false;
  std::optional<std::pair<Coord, Coord>> speed_violation;
  std::optional<EdgeId> cap_violation;
};

BlackResult black_check(const WeightField& field, const NBox& nb, const Cuboid& b, const NBoxTuning& tuning,
                        const Distribution& law) {
  const Box& box = field.box();
  BlackResult res;
  const std::vector<VertexId> bv = members(box, b);

  // (2) cap on edges meeting B.
  const double fp = law.f_plus();
  res.cap_dropped = std::isfinite(fp) && law.atom_at_f_plus() > 0;
  if (!res.cap_dropped && std::isfinite(fp)) {
    const double cap = fp - 1 / tuning.r;
    for (VertexId v : bv) {
      for (const Incidence& inc : box.incident(v)) {
        const bool above = field.mode() == WeightMode::exact
                               ? static_cast<long double>(field.numerator(inc.edge)) >
                                     std::ldexp(static_cast<long double>(cap), field.grid_exponent())
                               : field.weight(inc.edge) > cap;
        if (above) {
          res.cap_ok = false;
          res.cap_violation = inc.edge;
          break;
        }
      }
      if (!res.cap_ok) break;
    }
  }

  // (1) speed for pairs at l1 distance >= n^{1/3}.
  const double speed = law.f_minus() + tuning.delta_speed;
  std::int64_t max_l1 = 0;
  for (int i = 0; i < b.lo.dimension(); ++i) max_l1 += b.hi[i] - b.lo[i];
  ShortestPathOptions opt;
  opt.cutoff = speed * static_cast<double>(max_l1);
  for (VertexId v : bv) {
    const PassageTimes pt = shortest_paths(field, v, opt);
    const Coord cv = box.coord(v);
    for (VertexId w : bv) {
      if (w <= v) continue;
      const Coord cw = box.coord(w);
      const std::int64_t l1 = lattice_metrics(cv, cw).l1;
      if (l1 * l1 * l1 < nb.n) continue;
      if (!pt.at_least(w, speed * static_cast<double>(l1))) {
        res.speed_ok = false;
        res.speed_violation = std::pair{cv, cw};
        return res;
      }
    }
  }
  return res;
}

std::vector<VertexId> mark_ancestors(const GeodesicDag& dag, VertexId target, std::vector<char>& mask) {
  mask.assign(dag.box().vertex_count(), 0);
  std::vector<VertexId> stack{target};
  mask[static_cast<std::size_t>(target)] = 1;
  std::vector<VertexId> order;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    order.push_back(v);
    auto push = [&](VertexId u) {
      if (!mask[static_cast<std::size_t>(u)]) {
        mask[static_cast<std::size_t>(u)] = 1;
        stack.push_back(u);
      }
    };
    for (VertexId u : dag.predecessors(v)) push(u);
    for (VertexId u : dag.level_neighbors(v)) push(u);
  }
  return order;
}

/// Breadth-first search on (vertex, state) restricted to ancestors of the
/// target; returns the walk to the first target state satisfying `accept`.
template <class Step, class Accept>
std::vector<VertexId> product_search(const GeodesicDag& dag, VertexId target, int states, int initial, Step step,
                                     Accept accept) {
  std::vector<char> anc;
  mark_ancestors(dag, target, anc);
  const std::size_t n = dag.box().vertex_count();
  const auto S = static_cast<std::size_t>(states);
  std::vector<std::int64_t> parent(n * S, -2);
  auto key = [&](VertexId v, int s) { return static_cast<std::size_t>(v) * S + static_cast<std::size_t>(s); };
  std::queue<std::pair<VertexId, int>> q;
  const VertexId src = dag.source();
  parent[key(src, initial)] = -1;
  q.emplace(src, initial);
  while (!q.empty()) {
    const auto [v, s] = q.front();
    q.pop();
    if (v == target && accept(s)) {
      std::vector<VertexId> walk;
      for (std::int64_t k = static_cast<std::int64_t>(key(v, s)); k >= 0; k = parent[static_cast<std::size_t>(k)]) {
        walk.push_back(static_cast<VertexId>(static_cast<std::size_t>(k) / S));
      }
      std::reverse(walk.begin(), walk.end());
      return walk;
    }
    auto go = [&](VertexId w) {
      if (!anc[static_cast<std::size_t>(w)]) return;
      const int ns = step(s, v, w);
      const std::size_t kk = key(w, ns);
      if (parent[kk] != -2) return;
      parent[kk] = static_cast<std::int64_t>(key(v, s));
      q.emplace(w, ns);
    };
    for (VertexId w : dag.successors(v)) go(w);
    for (VertexId w : dag.level_neighbors(v)) go(w);
  }
  return {};
}

}  // namespace

bool crosses(const Box& box, std::span<const VertexId> path, const NBox& nbox) {
  const Region r = region_of(nbox);
  int state = 0;
  for (VertexId v : path) {
    state = cross_step(r, state, box.coord(v));
    if (state == 3) return true;
  }
  return false;
}

NBoxColor nbox_classify(const WeightField& field, const GeodesicDag& dag, VertexId target, const NBox& nbox,
                        const NBoxTuning& tuning) {
  const Box& box = field.box();
  if (!(dag.box() == box)) throw std::invalid_argument("nbox_classify: DAG and field boxes differ");
  if (tuning.m < 1) throw std::invalid_argument("nbox_classify: window M must be >= 1");
  if (!(tuning.r > 0)) throw std::invalid_argument("nbox_classify: R must be positive");
  const Region reg = region_of(nbox);
  if (!box.contains(reg.b)) {
    throw std::invalid_argument("nbox_classify: " + nbox.to_string() + " is not inside the box");
  }
  if (!dag.reachable(target)) {
    throw UnreachableTarget("nbox_classify: target " + box.coord(target).to_string() + " is unreachable");
  }
  const Distribution& law = law_of(field, tuning);

  NBoxColor col;
  col.box = nbox;
  const BlackResult br = black_check(field, nbox, reg.b, tuning, law);
  col.speed_ok = br.speed_ok;
  col.cap_ok = br.cap_ok;
  col.cap_dropped = br.cap_dropped;
  col.speed_violation = br.speed_violation;
  col.cap_violation = br.cap_violation;
  col.black = br.speed_ok && (br.cap_dropped || br.cap_ok);

  const int init = cross_step(reg, 0, box.coord(dag.source()));
  col.crossing_path = product_search(
      dag, target, 4, init, [&](int s, VertexId, VertexId w) { return cross_step(reg, s, box.coord(w)); },
      [](int s) { return s == 3; });
  col.white = !col.crossing_path.empty();
  col.gray = col.black && col.white;

  const auto M = static_cast<int>(tuning.m);
  auto heavy_step = [&](int c, VertexId u, VertexId w) {
    if (c == M) return M;
    const EdgeId e = box.edge_between(u, w);
    const bool inside = reg.in_b(box.coord(u)) && reg.in_b(box.coord(w));
    return inside && field.at_least(e, tuning.alpha2) ? c + 1 : 0;
  };
  col.bad_path = product_search(dag, target, M + 1, 0, heavy_step, [&](int c) { return c < M; });
  col.good = col.bad_path.empty();
  if (col.good) {
    const std::vector<VertexId> path = canonical_path(dag, target);
    int c = 0;
    for (std::size_t i = 1; i < path.size(); ++i) {
      c = heavy_step(c == M ? 0 : c, path[i - 1], path[i]);
      if (c == M) {
        col.heavy_window_start = static_cast<std::int64_t>(i) - M + 1;
        break;
      }
    }
  }
  return col;
}

std::vector<NBox> nboxes_meeting(const Box& box, std::span<const VertexId> path, int n) {
  if (n < 1) throw std::invalid_argument("nboxes_meeting: n must be >= 1");
  const int d = box.dimension();
  std::set<NBox> boxes;
  for (VertexId v : path) {
    const Coord c = box.coord(v);
    for (int m = 0; m < d; ++m) {
      std::vector<std::pair<int, int>> range(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) {
        range[static_cast<std::size_t>(i)] =
            i == m ? std::pair{ceil_div(c[i] - 2 * n, n), floor_div(c[i] - n, n)}
                   : std::pair{ceil_div(c[i] - 2 * n, n), floor_div(c[i] + n, n)};
      }
      Coord l(d);
      for (int i = 0; i < d; ++i) l[i] = range[static_cast<std::size_t>(i)].first;
      while (true) {
        NBox nb{l, n, m + 1};
        if (nb.b().contains(c)) boxes.insert(nb);
        int i = d - 1;
        while (i >= 0 && l[i] == range[static_cast<std::size_t>(i)].second) {
          l[i] = range[static_cast<std::size_t>(i)].first;
          --i;
        }
        if (i < 0) break;
        ++l[i];
      }
    }
  }
  return {boxes.begin(), boxes.end()};
}

GrayCount count_gray(const WeightField& field, const Coord& source, const Coord& target, int n,
                     const NBoxTuning& tuning) {
  if (n < 1) throw std::invalid_argument("count_gray: n must be >= 1");
  const Box& box = field.box();
  ShortestPathOptions opt;
  opt.targets = {box.vertex_id(target)};
  const GeodesicDag dag = geodesic_dag(field, source, opt);
  const PathStats ps = DagStatistics(dag, field).at(target);
  if (ps.count.value != 1 || ps.count.saturated) {
    throw NonUniqueGeodesic("count_gray: optimal path " + source.to_string() + " -> " + target.to_string() +
                            " is not unique");
  }
  const std::vector<VertexId> path = canonical_path(dag, box.vertex_id(target));
  const Distribution& law = law_of(field, tuning);
  const std::vector<NBox> boxes = nboxes_meeting(box, path, n);

  GrayCount out;
  for (const NBox& nb : boxes) {
    const Cuboid b = nb.b();
    if (!box.contains(b)) {
      ++out.boxes_skipped;
      continue;
    }
    ++out.boxes_classified;
    const bool white = crosses(box, path, nb);
    const BlackResult br = black_check(field, nb, b, tuning, law);
    const bool black = br.speed_ok && (br.cap_dropped || br.cap_ok);
    out.black += black ? 1 : 0;
    out.white += white ? 1 : 0;
    if (black && white) {
      ++out.gray;
      out.gray_boxes.push_back(nb);
    }
  }
  return out;
}

}  // namespace fpp
