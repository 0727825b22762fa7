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

#include <cmath>

#include "fpp/error.hpp"
#include "fpp/field_io.hpp"
#include "fpp/nbox.hpp"
#include "generators.hpp"

namespace fpp {
namespace {

struct Toy {
  Fixture fx;
  NBox nbox;
  Coord source, target;
};

Toy load_toy() {
  Toy t;
  t.fx = load_fixture(testing::fixture_path("nbox_toy.txt"));
  const auto nb = t.fx.expect("nbox")[0];
  t.nbox = NBox{Coord::parse(nb[1]), std::stoi(nb[2]), std::stoi(nb[3])};
  t.source = Coord::parse(t.fx.expect("source")[0][1]);
  t.target = Coord::parse(t.fx.expect("target")[0][1]);
  return t;
}

NBoxTuning toy_tuning(double alpha2, std::int64_t m) {
  NBoxTuning tu;
  tu.delta_speed = 0.5;
  tu.r = 4;
  tu.m = m;
  tu.alpha2 = alpha2;
  tu.law = Distribution::uniform(0, 2);
  return tu;
}

TEST(NBox, Geometry) {
  for (int n : {1, 2, 4, 5}) {
    const NBox nb{{0, -1}, n, 1};
    EXPECT_EQ(nb.s().vertex_count(), static_cast<std::int64_t>(n) * n);
    EXPECT_EQ(nb.t().vertex_count(), static_cast<std::int64_t>(3 * n + 1) * (3 * n + 1));
    const Cuboid b = nb.b();
    EXPECT_EQ(b.hi[0] - b.lo[0] + 1, n + 1);
    EXPECT_EQ(b.hi[1] - b.lo[1] + 1, 3 * n + 1);
    const Cuboid b2 = NBox{{0, -1}, n, -2}.b();
    EXPECT_EQ(b2.hi[1] - b2.lo[1] + 1, n + 1);
    EXPECT_EQ(b2.hi[0] - b2.lo[0] + 1, 3 * n + 1);
  }
  const NBox three{{1, 0, -1}, 2, 3};
  EXPECT_EQ(three.s().vertex_count(), 8);
  EXPECT_EQ(three.t().vertex_count(), 343);
  EXPECT_EQ(three.b().vertex_count(), 7 * 7 * 3);
}

TEST(NBox, BIsIntersectionOfTwoCubes) {
  for (int j : {1, -1, 2, -2}) {
    const NBox nb{{1, -2}, 3, j};
    const int axis = nb.axis();
    Coord shifted = nb.l;
    shifted[axis] += 2 * (j > 0 ? 1 : -1);
    const Cuboid t1 = nb.t();
    const Cuboid t2 = NBox{shifted, 3, j}.t();
    const Cuboid b = nb.b();
    for (int x = -20; x <= 20; ++x) {
      for (int y = -20; y <= 20; ++y) {
        const Coord c{x, y};
        EXPECT_EQ(b.contains(c), t1.contains(c) && t2.contains(c));
      }
    }
  }
}

TEST(NBox, CanonicalForm) {
  const NBox neg{{2, 1}, 4, -1};
  const NBox pos{{0, 1}, 4, 1};
  EXPECT_TRUE(neg == pos);
  EXPECT_EQ(neg.b().lo, pos.b().lo);
  EXPECT_EQ(neg.b().hi, pos.b().hi);
  EXPECT_EQ(pos.to_string(), "B^1(0,1;4)");
  EXPECT_THROW((NBox{{0, 0}, 0, 1}).b(), std::invalid_argument);
  EXPECT_THROW((NBox{{0, 0}, 2, 3}).b(), std::invalid_argument);
}

TEST(NBox, ToyFixtureAsClassifiedByHand) {
  const Toy toy = load_toy();
  const auto f = toy.fx.field();
  const Cuboid b = toy.nbox.b();
  EXPECT_EQ(b.lo, (Coord{0, -8}));
  EXPECT_EQ(b.hi, (Coord{4, 4}));
  const auto dag = geodesic_dag(f, toy.source);
  const VertexId t = f.box().vertex_id(toy.target);
  for (const auto& g : toy.fx.expect("good")) {
    const auto col = nbox_classify(f, dag, t, toy.nbox, toy_tuning(std::stod(g[1]), std::stoll(g[2])));
    EXPECT_TRUE(col.speed_ok);
    EXPECT_TRUE(col.cap_ok);
    EXPECT_FALSE(col.cap_dropped);
    EXPECT_TRUE(col.black);
    EXPECT_TRUE(col.white);
    EXPECT_TRUE(col.gray);
    EXPECT_TRUE(crosses(f.box(), col.crossing_path, toy.nbox));
    EXPECT_EQ(col.good, g[3] == "yes") << "alpha2 " << g[1];
    if (col.good) {
      ASSERT_TRUE(col.heavy_window_start.has_value());
    } else {
      EXPECT_FALSE(col.bad_path.empty());
    }
  }
}

TEST(NBox, ToyFixtureCapBreak) {
  Toy toy = load_toy();
  const auto cb = toy.fx.expect("capbreak")[0];
  toy.fx.edges.emplace_back(Edge(Coord::parse(cb[1]), Coord::parse(cb[2])), std::stoll(cb[3]));
  const auto f = toy.fx.field();
  const auto dag = geodesic_dag(f, toy.source);
  const auto col = nbox_classify(f, dag, f.box().vertex_id(toy.target), toy.nbox, toy_tuning(1, 2));
  EXPECT_FALSE(col.cap_ok);
  EXPECT_FALSE(col.black);
  EXPECT_FALSE(col.gray);
  EXPECT_TRUE(col.white);
  ASSERT_TRUE(col.cap_violation.has_value());
  EXPECT_EQ(f.box().edge(*col.cap_violation), Edge(Coord::parse(cb[1]), Coord::parse(cb[2])));
}

TEST(NBox, PointMassAtUpperEndFailsCap) {
  const auto box = build_box(2, 8);
  const auto f = WeightField::from_numerators(box, std::vector<std::int64_t>(box->edge_count(), 2), 0);
  const auto dag = geodesic_dag(f, Coord{-6, 0});
  NBoxTuning tu = toy_tuning(1, 2);
  const auto col = nbox_classify(f, dag, box->vertex_id({6, 0}), NBox{{-1, -1}, 4, 1}, tu);
  EXPECT_FALSE(col.cap_ok);
  EXPECT_FALSE(col.black);
  // With an atom at F^+ the cap is dropped.
  tu.law = Distribution::two_point(1, 2, 0.5);
  tu.delta_speed = 0.5;
  const auto dropped = nbox_classify(f, dag, box->vertex_id({6, 0}), NBox{{-1, -1}, 4, 1}, tu);
  EXPECT_TRUE(dropped.cap_dropped);
  EXPECT_TRUE(dropped.black);
}

TEST(NBox, SpeedViolationWitness) {
  const auto box = build_box(2, 8);
  std::vector<std::int64_t> w(box->edge_count(), 16);
  for (int x = 0; x < 4; ++x) w[static_cast<std::size_t>(box->edge_id(Edge({x, 1}, {x + 1, 1})))] = 1;
  const auto f = WeightField::from_numerators(box, w, 4);
  const auto dag = geodesic_dag(f, Coord{-6, 0});
  const auto col = nbox_classify(f, dag, box->vertex_id({6, 0}), NBox{{-1, -1}, 4, 1}, toy_tuning(1, 2));
  EXPECT_FALSE(col.speed_ok);
  ASSERT_TRUE(col.speed_violation.has_value());
  const auto [v, u] = *col.speed_violation;
  EXPECT_LT(shortest_paths(f, v).time(u), 0.5 * static_cast<double>(lattice_metrics(v, u).l1));
}

TEST(NBox, Errors) {
  const auto box = build_box(2, 6);
  const auto f = WeightField::from_numerators(box, std::vector<std::int64_t>(box->edge_count(), 1), 0);
  const auto dag = geodesic_dag(f, Coord{0, 0});
  EXPECT_THROW(nbox_classify(f, dag, 0, NBox{{-1, -1}, 4, 1}, toy_tuning(1, 2)), std::invalid_argument);
  NBoxTuning no_law = toy_tuning(1, 2);
  no_law.law.reset();
  EXPECT_THROW(nbox_classify(f, dag, 0, NBox{{0, 0}, 1, 1}, no_law), std::invalid_argument);
}

TEST(NBox, GrayImpliesBlackAndWhite) {
  const auto box = build_box(2, 10);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto f = WeightField::sample(box, Distribution::uniform(0, 2), WeightMode::exact, seed);
    const auto dag = geodesic_dag(f, Coord{-8, 0});
    const VertexId t = box->vertex_id({8, 1});
    NBoxTuning tu;
    tu.delta_speed = 0.3;
    tu.r = 2;
    tu.m = 2;
    tu.alpha2 = 0.5;
    for (int lx = -2; lx <= 1; ++lx) {
      for (int ly = -1; ly <= 0; ++ly) {
        for (int j : {1, 2}) {
          const NBox nb{{lx, ly}, 3, j};
          if (!box->contains(nb.b())) continue;
          const auto col = nbox_classify(f, dag, t, nb, tu);
          EXPECT_EQ(col.gray, col.black && col.white);
          EXPECT_EQ(col.black, col.speed_ok && (col.cap_ok || col.cap_dropped));
          EXPECT_EQ(col.white, crosses(*box, canonical_path(dag, t), nb));
        }
      }
    }
  }
}

TEST(CountGray, TrivialCases) {
  const auto box = build_box(2, 12);
  const auto unit = WeightField::from_numerators(box, std::vector<std::int64_t>(box->edge_count(), 1), 0);
  NBoxTuning tu;
  tu.law = Distribution::point_mass(1);
  const auto g = count_gray(unit, {-6, 0}, {6, 0}, 3, tu);
  EXPECT_GT(g.boxes_classified, 0);
  EXPECT_EQ(g.black, 0);
  EXPECT_EQ(g.gray, 0);

  const auto f = WeightField::sample(box, Distribution::exponential(1), WeightMode::exact, 2);
  NBoxTuning tf;
  tf.delta_speed = 0.05;
  const auto shortp = count_gray(f, {0, 0}, {2, 0}, 4, tf);
  EXPECT_EQ(shortp.gray, 0);
  EXPECT_EQ(shortp.white, 0);
  EXPECT_THROW(count_gray(unit, {0, 0}, {2, 2}, 3, tu), NonUniqueGeodesic);
}

TEST(CountGray, MatchesPerBoxClassification) {
  const auto box = build_box(2, 14);
  const auto f = WeightField::sample(box, Distribution::exponential(1), WeightMode::exact, 5);
  NBoxTuning tu;
  tu.delta_speed = 0.02;
  const Coord s{-6, 0}, t{6, 0};
  const auto g = count_gray(f, s, t, 2, tu);
  const auto dag = geodesic_dag(f, s);
  for (const auto& nb : g.gray_boxes) {
    const auto col = nbox_classify(f, dag, box->vertex_id(t), nb, tu);
    EXPECT_TRUE(col.black);
    EXPECT_TRUE(col.white);
    EXPECT_TRUE(col.gray);
  }
  EXPECT_LE(g.gray, g.black);
  EXPECT_LE(g.gray, g.white);
}

TEST(RThresholds, Values) {
  const auto u = Distribution::uniform(0, 2);
  const auto r = RThresholds::compute(u, 4, 0.5, 1.0);
  EXPECT_DOUBLE_EQ(r.f_plus_r, 2 - 1.0 / 16);
  EXPECT_DOUBLE_EQ(r.f_minus_r, 1.0 / 16);
  EXPECT_DOUBLE_EQ(r.r_min, 2);  // needs R^-2 < delta/2
  const auto e = RThresholds::compute(Distribution::exponential(1), 3, 0.2, std::nullopt);
  EXPECT_TRUE(std::isinf(e.f_plus_r));
  const auto b = RThresholds::compute(Distribution::two_point(1, 3, 0.5), 1, 0.4, 2.0);
  EXPECT_EQ(b.f_minus_r, 1);
  EXPECT_EQ(b.f_plus_r, 3);
  EXPECT_EQ(b.r_min, 0);
  EXPECT_TRUE(std::isinf(RThresholds::compute(u, 4, 0.5, 2.0).r_min));
  EXPECT_THROW(RThresholds::compute(u, 0, 0.5, std::nullopt), std::invalid_argument);
}

TEST(RThresholds, EstimateHoldsAboveRMin) {
  const std::vector<Distribution> laws{Distribution::uniform(0, 2), Distribution::uniform(1, 1.5),
                                       Distribution::exponential(1), Distribution::shifted_exponential(0.5, 1),
                                       Distribution::two_point(0, 1, 0.3),
                                       Distribution::finite_table({{1, 0.2}, {2, 0.5}, {4, 0.3}})};
  testing::Gen g(3);
  for (const auto& law : laws) {
    for (int i = 0; i < 40; ++i) {
      const double delta = 0.01 + g.uniform();
      std::optional<double> alpha2;
      if (g.coin()) alpha2 = law.f_minus() + g.uniform() * (std::min(law.f_plus(), law.f_minus() + 3) - law.f_minus());
      const double rmin = RThresholds::compute(law, 1, delta, alpha2).r_min;
      if (std::isinf(rmin)) continue;
      for (double factor : {1.001, 1.5, 10.0, 1000.0}) {
        const double r = std::max(rmin, 1e-3) * factor;
        EXPECT_TRUE(RThresholds::compute(law, r, delta, alpha2).estimate_holds(law, delta, alpha2))
            << law.describe() << " delta " << delta << " r " << r;
      }
      if (rmin > 0) {
        const double below = rmin * 0.99;
        EXPECT_FALSE(RThresholds::compute(law, below, delta, alpha2).estimate_holds(law, delta, alpha2));
      }
    }
  }
}

}  // namespace
}  // namespace fpp
