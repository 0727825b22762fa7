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
#include "fpp/weights.hpp"

namespace fpp {

/// The n-box B^j(l; n) with its cubes S(l; n) and T(l; n). j in
/// {+-1, ..., +-d} selects the slab direction |j| and its side sgn(j).
struct NBox {
  Coord l;
  int n = 1;
  int j = 1;

  int axis() const { return (j > 0 ? j : -j) - 1; }
  /// S = {v : n l_i <= v_i < n (l_i + 1)}.
  Cuboid s() const;
  /// T = {v : n l_i - n <= v_i <= n (l_i + 2)}.
  Cuboid t() const;
  /// B = T(l) ∩ T(l + 2 sgn(j) e_|j|): thickness n+1 along |j|, 3n+1 elsewhere.
  Cuboid b() const;
  /// The same slab written with j > 0 (B^{-m}(l) = B^{+m}(l - 2 e_m)).
  NBox canonical() const;
  std::string to_string() const;

  friend bool operator==(const NBox& x, const NBox& y) { return x.canonical().key() == y.canonical().key(); }
  friend bool operator<(const NBox& x, const NBox& y) { return x.canonical().key() < y.canonical().key(); }

 private:
  std::pair<std::vector<int>, std::pair<int, int>> key() const;
};

/// F^+_R and F^-_R for a distribution and a tuning R.
struct RThresholds {
  double r = 0;
  double f_plus_r = 0;
  double f_minus_r = 0;
  /// Smallest R above which F^-_R < F^- + delta/2 < F^+_R and
  /// F^-_R <= alpha2 <= F^+_R hold (+infinity when no R works).
  double r_min = 0;

  static RThresholds compute(const Distribution& dist, double r, double delta, std::optional<double> alpha2);
  /// The two inequalities at this R.
  bool estimate_holds(const Distribution& dist, double delta, std::optional<double> alpha2) const;
};

struct NBoxTuning {
  /// delta' of the speed condition t(v,w) >= (F^- + delta')|v-w|_1.
  double delta_speed = 0.1;
  /// R of the weight cap tau_e <= F^+ - 1/R.
  double r = 4;
  /// Window length M of the Good condition.
  std::int64_t m = 1;
  double alpha2 = 0;
  /// Law supplying F^-, F^+ and the atom at F^+; defaults to the field's.
  std::optional<Distribution> law;
};

struct NBoxColor {
  NBox box;
  bool speed_ok = false;
  /// The weight-cap condition; vacuous (true) when it is dropped.
  bool cap_ok = false;
  bool cap_dropped = false;
  bool black = false;
  bool white = false;
  bool gray = false;
  bool good = false;

  /// A pair violating the speed condition.
  std::optional<std::pair<Coord, Coord>> speed_violation;
  /// An edge meeting B above the cap.
  std::optional<EdgeId> cap_violation;
  /// An optimal path crossing B (when white).
  std::vector<VertexId> crossing_path;
  /// An optimal path without a fully heavy window inside B (when not good).
  std::vector<VertexId> bad_path;
  /// First vertex of a fully heavy window inside B on the canonical path (when good).
  std::optional<std::int64_t> heavy_window_start;
};

/// Black: speed condition for pairs of B with |v-w|_1 >= n^{1/3}, plus the
/// cap for edges meeting B unless P(tau = F^+) > 0. White: some optimal
/// path source -> target crosses B in the short direction, i.e. visits both
/// faces of B orthogonal to |j| with the sub-path between them inside T.
/// Good: every optimal path has M consecutive edges inside B, all of weight
/// >= alpha2. Requires B inside the field's box; walks through zero-weight
/// clusters are treated as paths for white and good.
NBoxColor nbox_classify(const WeightField& field, const GeodesicDag& dag, VertexId target, const NBox& nbox,
                        const NBoxTuning& tuning);

/// Whether a vertex path crosses B (same rule as for white).
bool crosses(const Box& box, std::span<const VertexId> path, const NBox& nbox);

/// Every n-box (canonical form, ascending) whose B contains a vertex of the path.
std::vector<NBox> nboxes_meeting(const Box& box, std::span<const VertexId> path, int n);

struct GrayCount {
  std::int64_t boxes_classified = 0;
  /// n-boxes meeting the path but not contained in the field's box.
  std::int64_t boxes_skipped = 0;
  std::int64_t black = 0;
  std::int64_t white = 0;
  std::int64_t gray = 0;
  std::vector<NBox> gray_boxes;
};

/// Distinct gray n-boxes among those meeting the unique optimal path
/// source -> target. Throws NonUniqueGeodesic.
GrayCount count_gray(const WeightField& field, const Coord& source, const Coord& target, int n,
                     const NBoxTuning& tuning);

}  // namespace fpp
