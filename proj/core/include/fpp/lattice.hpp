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

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fpp {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;

inline constexpr VertexId kNoVertex = -1;
inline constexpr EdgeId kNoEdge = -1;
inline constexpr int kMaxDimension = 8;

/// A point of Z^d, 2 <= d <= kMaxDimension. Ordering is lexicographic.
class Coord {
 public:
  Coord() = default;
  explicit Coord(int dimension);
  Coord(std::initializer_list<int> components);
  explicit Coord(std::span<const int> components);

  int dimension() const noexcept { return dim_; }
  int operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  std::span<const int> components() const {
    return {c_.data(), static_cast<std::size_t>(dim_)};
  }

  std::int64_t l1_norm() const;
  std::int64_t linf_norm() const;

  /// "(x,y,...)".
  std::string to_string() const;
  /// "x,y,..." with components separated by ',' or ':'.
  std::string to_plain() const;
  /// Accepts "x,y", "(x,y)" and "x:y".
  static Coord parse(std::string_view text);

  friend bool operator==(const Coord&, const Coord&) = default;
  friend auto operator<=>(const Coord&, const Coord&) = default;

 private:
  int dim_ = 0;
  std::array<int, kMaxDimension> c_{};
};

Coord operator+(Coord a, const Coord& b);
Coord operator-(Coord a, const Coord& b);

struct LatticeDistance {
  std::int64_t l1 = 0;
  std::int64_t linf = 0;
  friend bool operator==(const LatticeDistance&, const LatticeDistance&) = default;
};

/// Both |x-y|_1 and d_inf(x,y). Throws std::invalid_argument on a
/// dimension mismatch.
LatticeDistance lattice_metrics(const Coord& x, const Coord& y);

/// Non-oriented nearest-neighbour edge, endpoints stored in ascending order.
class Edge {
 public:
  Edge(const Coord& a, const Coord& b);
  const Coord& a() const noexcept { return a_; }
  const Coord& b() const noexcept { return b_; }
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;

 private:
  Coord a_;
  Coord b_;
};

struct Incidence {
  VertexId vertex = kNoVertex;
  EdgeId edge = kNoEdge;
};

/// Axis-aligned cuboid [lo, hi] (inclusive) in Z^d.
struct Cuboid {
  Coord lo;
  Coord hi;
  bool contains(const Coord& v) const;
  std::int64_t vertex_count() const;
};

/// The origin-centred cube [-radius, radius]^d with dense vertex and edge
/// indices. Vertex ids follow lexicographic coordinate order.
class Box {
 public:
  Box(int dimension, int radius);

  int dimension() const noexcept { return dim_; }
  int radius() const noexcept { return radius_; }
  int side() const noexcept { return 2 * radius_ + 1; }
  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t edge_count() const noexcept { return endpoints_.size(); }

  bool contains(const Coord& v) const;
  bool contains(const Cuboid& c) const;
  /// Throws std::out_of_range when v is outside the box.
  VertexId vertex_id(const Coord& v) const;
  Coord coord(VertexId v) const;

  std::pair<VertexId, VertexId> endpoints(EdgeId e) const {
    return endpoints_[static_cast<std::size_t>(e)];
  }
  Edge edge(EdgeId e) const;
  /// Throws std::out_of_range when the edge is not inside the box.
  EdgeId edge_id(const Edge& e) const;
  /// kNoEdge when u and v are not adjacent.
  EdgeId edge_between(VertexId u, VertexId v) const;

  std::span<const Incidence> incident(VertexId v) const {
    const auto b = offsets_[static_cast<std::size_t>(v)];
    const auto e = offsets_[static_cast<std::size_t>(v) + 1];
    return {incidence_.data() + b, e - b};
  }

  /// |v|_inf for a vertex id.
  int linf_norm(VertexId v) const;
  /// Vertices with |v|_inf = radius.
  bool is_boundary(VertexId v) const { return linf_norm(v) == radius_; }
  std::vector<VertexId> boundary_vertices() const;
  /// radius - |v|_inf: l_inf distance to the complement of the box.
  int boundary_margin(VertexId v) const { return radius_ - linf_norm(v); }

  friend bool operator==(const Box& a, const Box& b) {
    return a.dim_ == b.dim_ && a.radius_ == b.radius_;
  }

 private:
  int dim_;
  int radius_;
  std::size_t vertex_count_;
  std::vector<std::int64_t> stride_;
  std::vector<std::pair<VertexId, VertexId>> endpoints_;
  std::vector<std::size_t> offsets_;
  std::vector<Incidence> incidence_;
};

using BoxPtr = std::shared_ptr<const Box>;

/// Throws std::invalid_argument when dimension < 2 or radius < 0.
BoxPtr build_box(int dimension, int radius);

struct BoundaryVertex {
  Coord coord;
  bool in_box = true;
  friend bool operator==(const BoundaryVertex&, const BoundaryVertex&) = default;
};

/// {v not in D : |v-w|_1 = 1 for some w in D}, sorted, with a flag for the
/// members that fall outside the box. Throws when D is not inside the box.
std::vector<BoundaryVertex> outer_boundary(std::span<const Coord> region,
                                           const Box& box);

}  // namespace fpp
