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

#include "fpp/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fpp {

namespace {

void check_dimension(int d) {
  if (d < 2 || d > kMaxDimension) {
    throw std::invalid_argument("coordinate dimension must be in [2, " +
                                std::to_string(kMaxDimension) + "], got " +
                                std::to_string(d));
  }
}

}  // namespace

Coord::Coord(int dimension) : dim_(dimension) { check_dimension(dimension); }

Coord::Coord(std::initializer_list<int> components)
    : Coord(std::span<const int>(components.begin(), components.size())) {}

Coord::Coord(std::span<const int> components)
    : dim_(static_cast<int>(components.size())) {
  check_dimension(dim_);
  std::copy(components.begin(), components.end(), c_.begin());
}

std::int64_t Coord::l1_norm() const {
  std::int64_t s = 0;
  for (int i = 0; i < dim_; ++i) s += std::abs(static_cast<std::int64_t>(c_[i]));
  return s;
}

std::int64_t Coord::linf_norm() const {
  std::int64_t m = 0;
  for (int i = 0; i < dim_; ++i)
    m = std::max(m, std::abs(static_cast<std::int64_t>(c_[i])));
  return m;
}

std::string Coord::to_string() const { return "(" + to_plain() + ")"; }

std::string Coord::to_plain() const {
  std::string s;
  for (int i = 0; i < dim_; ++i) {
    if (i) s += ',';
    s += std::to_string(c_[i]);
  }
  return s;
}

Coord Coord::parse(std::string_view text) {
  while (!text.empty() && (text.front() == '(' || text.front() == ' ')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ')' || text.back() == ' ')) text.remove_suffix(1);
  std::vector<int> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find_first_of(",:", pos);
    if (next == std::string_view::npos) next = text.size();
    std::string_view token = text.substr(pos, next - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    int value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
      throw std::invalid_argument("cannot parse coordinate '" + std::string(text) + "'");
    }
    parts.push_back(value);
    pos = next + 1;
  }
  return Coord(std::span<const int>(parts));
}

Coord operator+(Coord a, const Coord& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("dimension mismatch");
  for (int i = 0; i < a.dimension(); ++i) a[i] += b[i];
  return a;
}

Coord operator-(Coord a, const Coord& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("dimension mismatch");
  for (int i = 0; i < a.dimension(); ++i) a[i] -= b[i];
  return a;
}

LatticeDistance lattice_metrics(const Coord& x, const Coord& y) {
  if (x.dimension() != y.dimension()) {
    throw std::invalid_argument("lattice_metrics: dimension mismatch (" +
                                std::to_string(x.dimension()) + " vs " +
                                std::to_string(y.dimension()) + ")");
  }
  LatticeDistance d;
  for (int i = 0; i < x.dimension(); ++i) {
    const std::int64_t diff = std::abs(static_cast<std::int64_t>(x[i]) - y[i]);
    d.l1 += diff;
    d.linf = std::max(d.linf, diff);
  }
  return d;
}

Edge::Edge(const Coord& a, const Coord& b) : a_(std::min(a, b)), b_(std::max(a, b)) {
  if (lattice_metrics(a, b).l1 != 1) {
    throw std::invalid_argument("edge endpoints " + a.to_string() + " and " +
                                b.to_string() + " are not nearest neighbours");
  }
}

bool Cuboid::contains(const Coord& v) const {
  if (v.dimension() != lo.dimension()) return false;
  for (int i = 0; i < v.dimension(); ++i) {
    if (v[i] < lo[i] || v[i] > hi[i]) return false;
  }
  return true;
}

std::int64_t Cuboid::vertex_count() const {
  std::int64_t n = 1;
  for (int i = 0; i < lo.dimension(); ++i) n *= std::max<std::int64_t>(0, hi[i] - lo[i] + 1);
  return n;
}

Box::Box(int dimension, int radius) : dim_(dimension), radius_(radius) {
  if (dimension < 2) {
    throw std::invalid_argument("box dimension must be >= 2, got " + std::to_string(dimension));
  }
  if (dimension > kMaxDimension) {
    throw std::invalid_argument("box dimension must be <= " + std::to_string(kMaxDimension));
  }
  if (radius < 0) {
    throw std::invalid_argument("box radius must be >= 0, got " + std::to_string(radius));
  }
  const std::int64_t side = 2 * static_cast<std::int64_t>(radius) + 1;
  std::int64_t count = 1;
  stride_.assign(static_cast<std::size_t>(dim_), 1);
  for (int i = dim_ - 1; i >= 0; --i) {
    stride_[static_cast<std::size_t>(i)] = count;
    count *= side;
    if (count > (std::int64_t{1} << 28)) {
      throw std::invalid_argument("box too large for dense indexing");
    }
  }
  vertex_count_ = static_cast<std::size_t>(count);

  // Edges are numbered by (lower endpoint id, axis).
  std::vector<std::int32_t> degree(vertex_count_, 0);
  endpoints_.reserve(static_cast<std::size_t>(dim_) * vertex_count_);
  for (std::size_t v = 0; v < vertex_count_; ++v) {
    const Coord c = coord(static_cast<VertexId>(v));
    for (int axis = 0; axis < dim_; ++axis) {
      if (c[axis] < radius_) {
        const auto w = static_cast<VertexId>(v + static_cast<std::size_t>(stride_[static_cast<std::size_t>(axis)]));
        endpoints_.emplace_back(static_cast<VertexId>(v), w);
        ++degree[v];
        ++degree[static_cast<std::size_t>(w)];
      }
    }
  }
  offsets_.assign(vertex_count_ + 1, 0);
  for (std::size_t v = 0; v < vertex_count_; ++v) offsets_[v + 1] = offsets_[v] + static_cast<std::size_t>(degree[v]);
  incidence_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t e = 0; e < endpoints_.size(); ++e) {
    const auto [u, w] = endpoints_[e];
    incidence_[fill[static_cast<std::size_t>(u)]++] = {w, static_cast<EdgeId>(e)};
    incidence_[fill[static_cast<std::size_t>(w)]++] = {u, static_cast<EdgeId>(e)};
  }
  for (std::size_t v = 0; v < vertex_count_; ++v) {
    std::sort(incidence_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
              incidence_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]),
              [](const Incidence& a, const Incidence& b) { return a.vertex < b.vertex; });
  }
}

bool Box::contains(const Coord& v) const {
  if (v.dimension() != dim_) return false;
  for (int i = 0; i < dim_; ++i) {
    if (v[i] < -radius_ || v[i] > radius_) return false;
  }
  return true;
}

bool Box::contains(const Cuboid& c) const { return contains(c.lo) && contains(c.hi); }

VertexId Box::vertex_id(const Coord& v) const {
  if (!contains(v)) {
    throw std::out_of_range("vertex " + v.to_string() + " is outside the box of radius " +
                            std::to_string(radius_));
  }
  std::int64_t id = 0;
  for (int i = 0; i < dim_; ++i) id += (v[i] + radius_) * stride_[static_cast<std::size_t>(i)];
  return static_cast<VertexId>(id);
}

Coord Box::coord(VertexId v) const {
  Coord c(dim_);
  std::int64_t rest = v;
  const std::int64_t side = 2 * static_cast<std::int64_t>(radius_) + 1;
  for (int i = dim_ - 1; i >= 0; --i) {
    c[i] = static_cast<int>(rest % side) - radius_;
    rest /= side;
  }
  return c;
}

Edge Box::edge(EdgeId e) const {
  const auto [u, v] = endpoints(e);
  return Edge(coord(u), coord(v));
}

EdgeId Box::edge_id(const Edge& e) const {
  const EdgeId id = edge_between(vertex_id(e.a()), vertex_id(e.b()));
  if (id == kNoEdge) throw std::out_of_range("edge is not inside the box");
  return id;
}

EdgeId Box::edge_between(VertexId u, VertexId v) const {
  for (const Incidence& inc : incident(u)) {
    if (inc.vertex == v) return inc.edge;
  }
  return kNoEdge;
}

int Box::linf_norm(VertexId v) const {
  int m = 0;
  std::int64_t rest = v;
  const std::int64_t side = 2 * static_cast<std::int64_t>(radius_) + 1;
  for (int i = 0; i < dim_; ++i) {
    const int c = static_cast<int>(rest % side) - radius_;
    rest /= side;
    m = std::max(m, std::abs(c));
  }
  return m;
}

std::vector<VertexId> Box::boundary_vertices() const {
  std::vector<VertexId> out;
  for (std::size_t v = 0; v < vertex_count_; ++v) {
    if (is_boundary(static_cast<VertexId>(v))) out.push_back(static_cast<VertexId>(v));
  }
  return out;
}

BoxPtr build_box(int dimension, int radius) {
  return std::make_shared<const Box>(dimension, radius);
}

std::vector<BoundaryVertex> outer_boundary(std::span<const Coord> region, const Box& box) {
  std::set<Coord> members(region.begin(), region.end());
  for (const Coord& c : members) {
    if (!box.contains(c)) {
      throw std::invalid_argument("outer_boundary: region vertex " + c.to_string() +
                                  " lies outside the box");
    }
  }
  std::set<Coord> ring;
  for (const Coord& c : members) {
    for (int axis = 0; axis < c.dimension(); ++axis) {
      for (int step : {-1, 1}) {
        Coord n = c;
        n[axis] += step;
        if (!members.contains(n)) ring.insert(n);
      }
    }
  }
  std::vector<BoundaryVertex> out;
  out.reserve(ring.size());
  for (const Coord& c : ring) out.push_back({c, box.contains(c)});
  return out;
}

}  // namespace fpp
