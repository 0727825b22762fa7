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

#include <gtest/gtest.h>

#include <algorithm>

#include "fpp/field_io.hpp"
#include "fpp/fpt.hpp"
#include "fpp/oracle.hpp"
#include "generators.hpp"

namespace fpp {
namespace {

TEST(Oracle, UnitWeightMonotonePaths) {
  const auto box = build_box(2, 3);
  const auto f = WeightField::from_numerators(box, std::vector<std::int64_t>(box->edge_count(), 1), 0);
  const auto r = brute_force(f, box->vertex_id({0, 0}), box->vertex_id({2, 1}), 9);
  EXPECT_EQ(r.time, 3);
  EXPECT_EQ(r.count(), 3u);
  EXPECT_FALSE(r.partial);
  EXPECT_EQ(r.min_len(), 3);
  EXPECT_EQ(r.max_len(), 3);
  EXPECT_TRUE(std::is_sorted(r.paths.begin(), r.paths.end()));
}

TEST(Oracle, SingleEdge) {
  const auto box = build_box(2, 2);
  const auto f = testing::family_field(testing::Family::table3, 2, 2, 3);
  const EdgeId e = box->edge_id(Edge({0, 0}, {1, 0}));
  const auto r = brute_force(f, box->vertex_id({0, 0}), box->vertex_id({1, 0}), 16);
  // Every other route between adjacent vertices has length >= 3 and weight >= 3.
  if (f.numerator(e) < 3) {
    EXPECT_EQ(r.time, f.numerator(e));
    EXPECT_EQ(r.count(), 1u);
  }
  EXPECT_LE(r.time, f.numerator(e));
}

TEST(Oracle, HandFixture) {
  const auto fx = load_fixture(testing::fixture_path("hand_r1.txt"));
  const auto f = fx.field();
  const auto& box = f.box();
  for (const auto& e : fx.expect("time")) {
    const auto r = brute_force(f, box.vertex_id(Coord::parse(e[1])), box.vertex_id(Coord::parse(e[2])), 8);
    EXPECT_EQ(r.time, std::stoll(e[3]));
  }
  for (const auto& e : fx.expect("paths")) {
    const auto r = brute_force(f, box.vertex_id(Coord::parse(e[1])), box.vertex_id(Coord::parse(e[2])), 8);
    EXPECT_EQ(r.count(), std::stoull(e[3]));
    EXPECT_EQ(r.min_len(), std::stoll(e[4]));
    EXPECT_EQ(r.max_len(), std::stoll(e[5]));
  }
  for (const auto& e : fx.expect("heavy")) {
    const auto r = brute_force(f, box.vertex_id(Coord::parse(e[1])), box.vertex_id(Coord::parse(e[2])), 8);
    EXPECT_EQ(r.min_heavy(f, std::stod(e[3])), std::stoll(e[4]));
  }
  for (const auto& e : fx.expect("path")) {
    const auto r = brute_force(f, box.vertex_id(Coord::parse(e[1])), box.vertex_id(Coord::parse(e[2])), 8);
    std::vector<Coord> want;
    for (std::size_t i = 3; i < e.size(); ++i) want.push_back(Coord::parse(e[i]));
    ASSERT_EQ(r.count(), 1u);
    EXPECT_EQ(r.paths[0], testing::ids(box, want));
  }
}

TEST(Oracle, PathsAreValidAndOptimal) {
  for (auto fam : {testing::Family::bernoulli01, testing::Family::table3, testing::Family::small_integers}) {
    const auto f = testing::family_field(fam, 2, 2, 11);
    const auto& box = f.box();
    const VertexId a = box.vertex_id({-1, 0});
    for (std::size_t b = 0; b < box.vertex_count(); ++b) {
      const auto r = brute_force(f, a, static_cast<VertexId>(b), 24);
      EXPECT_EQ(r.time, testing::reference_times(f, a)[b]);
      for (const auto& p : r.paths) {
        EXPECT_EQ(p.front(), a);
        EXPECT_EQ(p.back(), static_cast<VertexId>(b));
        std::vector<VertexId> s = p;
        std::sort(s.begin(), s.end());
        EXPECT_EQ(std::adjacent_find(s.begin(), s.end()), s.end());
        EXPECT_EQ(path_weight_exact(f, p), r.time);
      }
    }
  }
}

TEST(Oracle, CapTooSmallFlagsPartial) {
  const auto box = build_box(2, 2);
  std::vector<std::int64_t> w(box->edge_count(), 5);
  // A cheap detour of length 3 around the direct edge.
  w[static_cast<std::size_t>(box->edge_id(Edge({0, 0}, {0, 1})))] = 1;
  w[static_cast<std::size_t>(box->edge_id(Edge({0, 1}, {1, 1})))] = 1;
  w[static_cast<std::size_t>(box->edge_id(Edge({1, 0}, {1, 1})))] = 1;
  const auto f = WeightField::from_numerators(box, w, 0);
  const VertexId a = box->vertex_id({0, 0}), b = box->vertex_id({1, 0});
  EXPECT_TRUE(brute_force(f, a, b, 1).partial);
  const auto full = brute_force(f, a, b, 3);
  EXPECT_FALSE(full.partial);
  EXPECT_EQ(full.time, 3);
  EXPECT_THROW(brute_force(f, a, box->vertex_id({2, 2}), 3), std::invalid_argument);
}

TEST(Oracle, Preconditions) {
  const auto big = build_box(2, 4);
  const auto f = WeightField::from_numerators(big, std::vector<std::int64_t>(big->edge_count(), 1), 0);
  EXPECT_THROW(brute_force(f, 0, 1, 4), std::invalid_argument);
  EXPECT_NO_THROW(brute_force(f, 0, 1, 4, true));
  const auto fl = WeightField::sample(build_box(2, 1), Distribution::uniform(0, 1), WeightMode::floating, 1);
  EXPECT_THROW(brute_force(fl, 0, 1, 4), std::invalid_argument);
}

}  // namespace
}  // namespace fpp
