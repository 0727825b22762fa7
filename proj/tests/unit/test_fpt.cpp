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
#include <cmath>

#include "fpp/error.hpp"
#include "fpp/field_io.hpp"
#include "fpp/fpt.hpp"
#include "fpp/oracle.hpp"
#include "generators.hpp"

namespace fpp {
namespace {

using testing::Family;

WeightField constant_field(int dim, int radius, std::int64_t c, WeightMode mode = WeightMode::exact) {
  const auto box = build_box(dim, radius);
  if (mode == WeightMode::floating) {
    return WeightField::from_values(box, std::vector<double>(box->edge_count(), static_cast<double>(c)));
  }
  return WeightField::from_numerators(box, std::vector<std::int64_t>(box->edge_count(), c), 0);
}

TEST(Fpt, UnitWeightsGiveL1) {
  const auto f = constant_field(2, 4, 1);
  const auto pt = shortest_paths(f, Coord{0, 0});
  EXPECT_EQ(pt.time(Coord{3, 2}), 5);
  for (std::size_t v = 0; v < f.box().vertex_count(); ++v) {
    EXPECT_EQ(pt.exact_time(static_cast<VertexId>(v)), f.box().coord(static_cast<VertexId>(v)).l1_norm());
  }
  const auto c = constant_field(3, 2, 7);
  const auto pc = shortest_paths(c, Coord{0, 0, 0});
  EXPECT_EQ(pc.time(Coord{2, -1, 1}), 7 * 4);
}

TEST(Fpt, HandFixtureTimesAndPaths) {
  const auto fx = load_fixture(testing::fixture_path("hand_r1.txt"));
  const auto f = fx.field();
  for (const auto& e : fx.expect("time")) {
    const auto pt = shortest_paths(f, Coord::parse(e[1]));
    EXPECT_EQ(pt.exact_time(f.box().vertex_id(Coord::parse(e[2]))), std::stoll(e[3])) << e[1] << "->" << e[2];
  }
  for (const auto& e : fx.expect("paths")) {
    const auto dag = geodesic_dag(f, Coord::parse(e[1]));
    const auto tgt = Coord::parse(e[2]);
    EXPECT_EQ(count_optimal_paths(dag, f, tgt).value, std::stoull(e[3]));
    const auto [lo, hi] = extremal_path_lengths(dag, f, tgt);
    EXPECT_EQ(lo, std::stoll(e[4]));
    EXPECT_EQ(hi, std::stoll(e[5]));
  }
  for (const auto& e : fx.expect("heavy")) {
    const auto dag = geodesic_dag(f, Coord::parse(e[1]));
    EXPECT_EQ(min_heavy_edges(dag, f, Coord::parse(e[2]), std::stod(e[3])), std::stoll(e[4]));
  }
  for (const auto& e : fx.expect("path")) {
    const auto dag = geodesic_dag(f, Coord::parse(e[1]));
    std::vector<Coord> want;
    for (std::size_t i = 3; i < e.size(); ++i) want.push_back(Coord::parse(e[i]));
    const auto got = canonical_path(dag, f.box().vertex_id(Coord::parse(e[2])));
    EXPECT_EQ(got, testing::ids(f.box(), want));
  }
}

TEST(Fpt, MatchesBellmanFord) {
  for (auto fam : {Family::unit, Family::bernoulli01, Family::table3, Family::discrete_uniform,
                   Family::small_integers}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto f = testing::family_field(fam, 2, 5, seed);
      testing::Gen g(seed, 3);
      const VertexId s = g.vertex(f.box());
      const auto pt = shortest_paths(f, s);
      const auto ref = testing::reference_times(f, s);
      EXPECT_TRUE(std::equal(ref.begin(), ref.end(), pt.exact_times().begin())) << testing::family_name(fam);
    }
  }
}

TEST(Fpt, FloatingMatchesExactOnDyadicWeights) {
  const auto e = testing::family_field(Family::table3, 2, 6, 4);
  std::vector<double> vals;
  for (std::size_t i = 0; i < e.edge_count(); ++i) vals.push_back(e.weight(static_cast<EdgeId>(i)));
  const auto fl = WeightField::from_values(e.box_ptr(), vals);
  const auto a = shortest_paths(e, Coord{1, -2});
  const auto b = shortest_paths(fl, Coord{1, -2});
  for (std::size_t v = 0; v < e.box().vertex_count(); ++v) {
    EXPECT_EQ(a.time(static_cast<VertexId>(v)), b.time(static_cast<VertexId>(v)));
  }
}

TEST(Fpt, TargetedSearchAgreesOnTargets) {
  const auto f = testing::family_field(Family::discrete_uniform, 2, 8, 1);
  const auto full = shortest_paths(f, Coord{0, 0});
  testing::Gen g(2);
  for (int i = 0; i < 30; ++i) {
    ShortestPathOptions opt;
    opt.targets = {g.vertex(f.box()), g.vertex(f.box())};
    const auto part = shortest_paths(f, Coord{0, 0}, opt);
    for (VertexId t : opt.targets) EXPECT_EQ(part.exact_time(t), full.exact_time(t));
    for (std::size_t v = 0; v < f.box().vertex_count(); ++v) {
      if (part.reached(static_cast<VertexId>(v))) {
        EXPECT_EQ(part.exact_time(static_cast<VertexId>(v)), full.exact_time(static_cast<VertexId>(v)));
      }
    }
  }
}

TEST(Fpt, CutoffLeavesFarVerticesUnreached) {
  const auto f = constant_field(2, 5, 1);
  ShortestPathOptions opt;
  opt.cutoff = 3.5;
  const auto pt = shortest_paths(f, Coord{0, 0}, opt);
  EXPECT_TRUE(pt.reached(f.box().vertex_id({2, 1})));
  EXPECT_FALSE(pt.reached(f.box().vertex_id({2, 2})));
  EXPECT_TRUE(std::isinf(pt.time(Coord{2, 2})));
  EXPECT_TRUE(pt.at_least(f.box().vertex_id({2, 2}), 100));
}

TEST(Fpt, AtLeastIsExact) {
  const auto box = build_box(2, 1);
  const auto f = WeightField::from_numerators(box, std::vector<std::int64_t>(box->edge_count(), 3), 2);
  const auto pt = shortest_paths(f, Coord{0, 0});
  const VertexId v = box->vertex_id({1, 1});  // t = 1.5
  EXPECT_TRUE(pt.at_least(v, 1.5));
  EXPECT_FALSE(pt.at_least(v, std::nextafter(1.5, 2.0)));
}

TEST(Fpt, PathWeightAndOptimality) {
  const auto f = constant_field(2, 2, 2);
  const auto& box = f.box();
  const std::vector<VertexId> p = testing::ids(box, {{0, 0}, {1, 0}, {1, 1}});
  EXPECT_EQ(path_weight(f, p), 4);
  EXPECT_EQ(path_weight_exact(f, p), 4);
  EXPECT_TRUE(is_optimal_path(f, p));
  const std::vector<VertexId> detour = testing::ids(box, {{0, 0}, {1, 0}, {2, 0}, {2, 1}, {1, 1}});
  EXPECT_FALSE(is_optimal_path(f, detour));
  const std::vector<VertexId> jump = testing::ids(box, {{0, 0}, {1, 1}});
  EXPECT_THROW(path_weight(f, jump), std::invalid_argument);
}

TEST(Dag, UnitWeightsPredecessors) {
  const auto f = constant_field(2, 3, 1);
  const auto dag = geodesic_dag(f, Coord{0, 0});
  EXPECT_EQ(dag.predecessors(f.box().vertex_id({1, 1})).size(), 2u);
  EXPECT_EQ(dag.predecessors(f.box().vertex_id({2, 0})).size(), 1u);
  EXPECT_EQ(dag.predecessors(f.box().vertex_id({0, 0})).size(), 0u);
  EXPECT_FALSE(dag.has_level_edges());
  const auto fl = constant_field(2, 3, 1, WeightMode::floating);
  const auto dfl = geodesic_dag(fl, Coord{0, 0});
  EXPECT_EQ(dfl.predecessors(f.box().vertex_id({1, 1})).size(), 2u);
}

TEST(Dag, UnitWeightCountsAndLengths) {
  const auto f = constant_field(2, 4, 1);
  const auto dag = geodesic_dag(f, Coord{0, 0});
  EXPECT_EQ(count_optimal_paths(dag, f, {3, 2}).value, 10u);
  EXPECT_EQ(extremal_path_lengths(dag, f, {3, 2}), std::make_pair(std::int64_t{5}, std::int64_t{5}));
  EXPECT_EQ(min_heavy_edges(dag, f, {3, 2}, 0), 5);
  EXPECT_EQ(min_heavy_edges(dag, f, {3, 2}, 1.5), 0);
}

TEST(Dag, GenericWeightsGiveTree) {
  const auto box = build_box(2, 6);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto f = WeightField::sample(box, Distribution::uniform(0, 1), WeightMode::exact, seed);
    const auto dag = geodesic_dag(f, Coord{0, 0});
    const DagStatistics st(dag, f);
    for (std::size_t v = 0; v < box->vertex_count(); ++v) {
      const auto id = static_cast<VertexId>(v);
      if (id == dag.source()) continue;
      EXPECT_EQ(dag.optimal_predecessor_count(id), 1u);
      const auto ps = st.at(id);
      EXPECT_EQ(ps.count.value, 1u);
      EXPECT_EQ(ps.min_len, ps.max_len);
      EXPECT_EQ(ps.min_len, static_cast<std::int64_t>(canonical_path(dag, id).size()) - 1);
    }
  }
}

TEST(Dag, InvariantsOnTieHeavyFamilies) {
  for (auto fam : {Family::unit, Family::bernoulli01, Family::table3, Family::small_integers}) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const auto f = testing::family_field(fam, 2, 4, seed);
      const auto& box = f.box();
      const auto dag = geodesic_dag(f, Coord{0, 0});
      const auto t = dag.times().exact_times();
      for (std::size_t v = 0; v < box.vertex_count(); ++v) {
        const auto id = static_cast<VertexId>(v);
        // Relaxation fixpoint and the exact tight-edge characterization.
        for (const auto& inc : box.incident(id)) {
          const auto u = static_cast<std::size_t>(inc.vertex);
          EXPECT_LE(t[v], t[u] + f.numerator(inc.edge));
          const bool tight = t[u] + f.numerator(inc.edge) == t[v];
          const auto preds = dag.predecessors(id);
          const auto lvl = dag.level_neighbors(id);
          const bool listed = std::binary_search(preds.begin(), preds.end(), inc.vertex) ||
                              std::binary_search(lvl.begin(), lvl.end(), inc.vertex);
          EXPECT_EQ(tight, listed);
        }
        if (id != dag.source()) {
          EXPECT_GE(dag.optimal_predecessor_count(id), 1u);
        }
      }
    }
  }
}

TEST(Dag, NegativeToleranceRejected) {
  const auto f = constant_field(2, 1, 1);
  const auto pt = shortest_paths(f, Coord{0, 0});
  EXPECT_THROW(build_geodesic_dag(pt, f, {-1, 0}), std::invalid_argument);
  EXPECT_THROW(build_geodesic_dag(pt, f, {0, -1e-9}), std::invalid_argument);
  EXPECT_NO_THROW(build_geodesic_dag(pt, f, {0, 0}));
}

TEST(Dag, UnreachableTargetThrows) {
  const auto f = constant_field(2, 3, 1);
  ShortestPathOptions opt;
  opt.cutoff = 1;
  const auto dag = geodesic_dag(f, Coord{0, 0}, opt);
  EXPECT_THROW(count_optimal_paths(dag, f, {3, 3}), UnreachableTarget);
  EXPECT_THROW(canonical_path(dag, f.box().vertex_id({3, 3})), UnreachableTarget);
}

TEST(Dag, CountSaturatesAndExactCountAgrees) {
  const auto f = constant_field(2, 17, 1);
  const auto dag = geodesic_dag(f, Coord{-17, -17});
  DagStatsOptions opt;
  opt.exact_counts = true;
  const DagStatistics st(dag, f, opt);
  const auto corner = st.at(Coord{17, 17});
  EXPECT_TRUE(corner.count.saturated);
  EXPECT_EQ(corner.count.value, kCountSaturation);
  boost::multiprecision::cpp_int binom = 1;
  for (int i = 1; i <= 34; ++i) binom = binom * (34 + i) / i;
  ASSERT_TRUE(corner.exact_count.has_value());
  EXPECT_EQ(*corner.exact_count, binom);
  const auto small = st.at(Coord{-15, -16});
  EXPECT_FALSE(small.count.saturated);
  EXPECT_EQ(small.count.value, 3u);
}

TEST(Dag, ZeroWeightClusters) {
  // All-zero weights: every vertex is an optimal endpoint of every
  // self-avoiding path, so counts equal the self-avoiding walk counts.
  const auto f = constant_field(2, 1, 0);
  const auto dag = geodesic_dag(f, Coord{0, 0});
  EXPECT_TRUE(dag.has_level_edges());
  EXPECT_EQ(dag.cluster_count(), 1u);
  for (const VertexId t : {f.box().vertex_id({1, 0}), f.box().vertex_id({1, 1})}) {
    const auto paths = enumerate_optimal_paths(dag, t);
    const auto oracle = brute_force(f, dag.source(), t, 8);
    EXPECT_EQ(paths, oracle.paths);
    const DagStatistics st(dag, f);
    EXPECT_EQ(st.at(t).count.value, oracle.count());
    EXPECT_EQ(st.at(t).min_len, oracle.min_len());
    EXPECT_EQ(st.at(t).max_len, oracle.max_len());
  }
}

TEST(Dag, MatchesOracleOnFamilies) {
  for (auto fam : {Family::unit, Family::bernoulli01, Family::table3, Family::discrete_uniform,
                   Family::small_integers}) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const auto f = testing::family_field(fam, 2, 2, seed);
      const auto& box = f.box();
      testing::Gen g(seed, 9);
      const VertexId s = g.vertex(box);
      const auto dag = build_geodesic_dag(shortest_paths(f, s), f, Tolerance::exact());
      DagStatsOptions so;
      so.heavy_threshold = f.represent(fam == Family::discrete_uniform ? 0.5 : 2);
      so.exact_counts = true;
      const DagStatistics st(dag, f, so);
      for (std::size_t v = 0; v < box.vertex_count(); ++v) {
        const auto t = static_cast<VertexId>(v);
        const auto oracle = brute_force(f, s, t, static_cast<std::int64_t>(box.vertex_count()) - 1);
        ASSERT_FALSE(oracle.partial);
        EXPECT_EQ(dag.times().exact_time(t), oracle.time);
        EXPECT_EQ(enumerate_optimal_paths(dag, t), oracle.paths) << testing::family_name(fam) << " seed " << seed;
        const auto ps = st.at(t);
        EXPECT_EQ(ps.count.value, oracle.count());
        EXPECT_EQ(*ps.exact_count, oracle.count());
        EXPECT_EQ(ps.min_len, oracle.min_len());
        EXPECT_EQ(ps.max_len, oracle.max_len());
        EXPECT_EQ(*ps.min_heavy, oracle.min_heavy(f, *so.heavy_threshold));
      }
    }
  }
}

TEST(Fpt, MetricAxioms) {
  for (int d : {2, 3}) {
    for (auto fam : {Family::table3, Family::bernoulli01, Family::discrete_uniform}) {
      const auto f = testing::family_field(fam, d, 2, 5);
      const auto& box = f.box();
      std::vector<std::vector<std::int64_t>> t;
      for (std::size_t v = 0; v < box.vertex_count(); ++v) {
        const auto pt = shortest_paths(f, static_cast<VertexId>(v));
        t.emplace_back(pt.exact_times().begin(), pt.exact_times().end());
      }
      const std::size_t n = box.vertex_count();
      for (std::size_t a = 0; a < n; ++a) {
        EXPECT_EQ(t[a][a], 0);
        for (std::size_t b = 0; b < n; ++b) {
          EXPECT_EQ(t[a][b], t[b][a]);
          for (std::size_t c = 0; c < n; ++c) ASSERT_LE(t[a][c], t[a][b] + t[b][c]);
        }
      }
    }
  }
}

TEST(Fpt, SubpathOptimalityAndParity) {
  for (int d : {2, 3}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto f = testing::family_field(Family::table3, d, 3, seed);
      const auto& box = f.box();
      const auto dag = geodesic_dag(f, Coord(d));
      DagStatsOptions so;
      so.heavy_threshold = 2;
      const DagStatistics st(dag, f, so);
      testing::Gen g(seed);
      for (int probe = 0; probe < 20; ++probe) {
        const VertexId t = g.vertex(box);
        const auto path = canonical_path(dag, t);
        EXPECT_TRUE(is_optimal_path(f, path));
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
          for (std::size_t j = i + 1; j < path.size(); ++j) {
            EXPECT_TRUE(is_optimal_path(f, std::span(path).subspan(i, j - i + 1)));
          }
        }
        const auto ps = st.at(t);
        const auto l1 = lattice_metrics(box.coord(dag.source()), box.coord(t)).l1;
        EXPECT_GE(ps.min_len, l1);
        EXPECT_LE(ps.min_len, ps.max_len);
        EXPECT_EQ((ps.min_len - l1) % 2, 0);
        EXPECT_EQ((ps.max_len - l1) % 2, 0);
        for (const auto& p : enumerate_optimal_paths(dag, t, 2000)) {
          EXPECT_EQ((static_cast<std::int64_t>(p.size()) - 1 - l1) % 2, 0);
        }
        std::int64_t heavy = 0;
        for (std::size_t i = 1; i < path.size(); ++i) heavy += f.at_least(box.edge_between(path[i - 1], path[i]), 2);
        EXPECT_LE(*ps.min_heavy, heavy);
        if (ps.count.value == 1) {
          EXPECT_EQ(ps.min_len, ps.max_len);
        }
      }
    }
  }
}

TEST(HeavyWindows, Examples) {
  const auto box = build_box(2, 3);
  std::vector<std::int64_t> w(box->edge_count(), 1);
  const std::vector<VertexId> path = testing::ids(*box, {{-3, 0}, {-2, 0}, {-1, 0}, {0, 0}, {1, 0}, {2, 0}});
  const auto all_heavy = WeightField::from_numerators(box, std::vector<std::int64_t>(box->edge_count(), 5), 0);
  EXPECT_EQ(count_heavy_windows(path, all_heavy, 2, 5), 4);
  EXPECT_EQ(count_heavy_windows(path, all_heavy, 5, 5), 1);
  EXPECT_EQ(count_heavy_windows(path, all_heavy, 6, 5), 0);
  const auto light = WeightField::from_numerators(box, w, 0);
  EXPECT_EQ(count_heavy_windows(path, light, 2, 5), 0);
  // H,H,L,H,H
  for (std::size_t i : {0u, 1u, 3u, 4u}) w[static_cast<std::size_t>(box->edge_between(path[i], path[i + 1]))] = 5;
  const auto pattern = WeightField::from_numerators(box, w, 0);
  EXPECT_EQ(count_heavy_windows(path, pattern, 2, 5), 2);
  EXPECT_EQ(count_heavy_windows(path, pattern, 1, 5), 4);
  EXPECT_THROW(count_heavy_windows(path, pattern, 0, 5), std::invalid_argument);
}

}  // namespace
}  // namespace fpp
