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

#include "fpp/certify.hpp"
#include "fpp/error.hpp"
#include "fpp/field_io.hpp"
#include "fpp/oracle.hpp"
#include "generators.hpp"

namespace fpp {
namespace {

using testing::Family;

WeightField unit_field(int radius) {
  const auto box = build_box(2, radius);
  return WeightField::from_numerators(box, std::vector<std::int64_t>(box->edge_count(), 1), 0);
}

WeightField generic_field(int radius, std::uint64_t seed, const Distribution& law = Distribution::exponential(1)) {
  return WeightField::sample(build_box(2, radius), law, WeightMode::exact, seed);
}

BlackParams params(BlackMode mode, double delta, double m) {
  BlackParams p;
  p.mode = mode;
  p.delta = delta;
  p.m = m;
  return p;
}

TEST(CertifyPair, UnitWeightsFailHeavyClause) {
  const auto f = unit_field(8);
  const auto rep = certify_pair(f, {0, 0}, {3, 0}, params(BlackMode::black, 0.1, 1));
  EXPECT_FALSE(rep.holds);
  EXPECT_EQ(rep.first_failing, 3);
  EXPECT_TRUE(rep.clauses[0].holds);
  EXPECT_TRUE(rep.clauses[1].holds);
  EXPECT_EQ(rep.clauses[2].lhs, 0);
  EXPECT_EQ(rep.size, 3);
  const auto r3 = certify_pair(f, {0, 0}, {2, 2}, params(BlackMode::black3, 0.1, 1));
  EXPECT_EQ(r3.first_failing, 3);
  EXPECT_EQ(r3.size, 4);
}

TEST(CertifyPair, ClauseValues) {
  const auto f = generic_field(10, 4);
  const Coord a{0, 0}, b{3, -1};
  const auto p = params(BlackMode::black, 0.05, 0.3);
  const auto rep = certify_pair(f, a, b, p);
  const auto dag = geodesic_dag(f, a);
  const auto path = canonical_path(dag, f.box().vertex_id(b));
  const double len = static_cast<double>(path.size() - 1);
  EXPECT_EQ(rep.size, len);
  EXPECT_EQ(rep.clauses[0].lhs, 4);
  EXPECT_EQ(rep.clauses[0].rhs, 0.05 * len);
  EXPECT_EQ(rep.clauses[1].lhs, dag.times().time(f.box().vertex_id(b)));
  std::int64_t heavy = 0;
  for (std::size_t i = 1; i < path.size(); ++i) heavy += f.at_least(f.box().edge_between(path[i - 1], path[i]), 0.9);
  EXPECT_EQ(rep.clauses[2].lhs, static_cast<double>(heavy));
  EXPECT_EQ(rep.holds, rep.first_failing == 0);
}

TEST(CertifyPair, PathCountReading) {
  const auto f = generic_field(10, 4);
  auto p = params(BlackMode::black, 0.5, 0.01);
  p.size_reading = SizeReading::path_count;
  const auto rep = certify_pair(f, {0, 0}, {2, 2}, p);
  EXPECT_EQ(rep.size, 1);
  EXPECT_EQ(rep.size_reading, SizeReading::path_count);
}

TEST(CertifyPair, Errors) {
  const auto f = unit_field(4);
  EXPECT_THROW(certify_pair(f, {2, 0}, {4, 0}, params(BlackMode::black, 0.1, 1)), InteriorityViolation);
  EXPECT_THROW(certify_pair(f, {0, 0}, {1, 1}, params(BlackMode::black, 0.1, 1)), NonUniqueGeodesic);
  EXPECT_NO_THROW(certify_pair(f, {0, 0}, {1, 1}, params(BlackMode::black3, 0.1, 1)));
  EXPECT_THROW(certify_pair(f, {0, 0}, {1, 0}, params(BlackMode::black, 0, 1)), std::invalid_argument);
  auto p2 = params(BlackMode::black2, 0.1, 1.5);
  EXPECT_THROW(certify_pair(f, {0, 0}, {1, 0}, p2), std::invalid_argument);
  const auto g = generic_field(6, 1, Distribution::uniform(0, 2));
  p2.m = 2;
  p2.alpha2 = 3;
  EXPECT_THROW(certify_pair(g, {0, 0}, {1, 0}, p2), std::invalid_argument);
  p2.alpha2 = 1;
  EXPECT_NO_THROW(certify_pair(g, {0, 0}, {1, 0}, p2));
}

TEST(CertifyPair, Black2CountsWindows) {
  const auto box = build_box(2, 8);
  std::vector<std::int64_t> w(box->edge_count(), 8);
  // A cheap straight corridor (0,0)..(4,0) with heavy-light pattern 2,2,1,2.
  const std::vector<int> pattern{2, 2, 1, 2};
  for (int x = 0; x < 4; ++x) w[static_cast<std::size_t>(box->edge_id(Edge({x, 0}, {x + 1, 0})))] = pattern[x];
  const auto f = WeightField::from_numerators(box, w, 0);
  BlackParams p = params(BlackMode::black2, 0.25, 2);
  p.alpha2 = 2;
  const auto rep = certify_pair(f, {0, 0}, {4, 0}, p);
  EXPECT_EQ(rep.clauses[2].lhs, 1);  // one window of two heavy edges
  EXPECT_EQ(rep.size, 4);
  EXPECT_TRUE(rep.holds);
  p.delta = 0.3;
  EXPECT_FALSE(certify_pair(f, {0, 0}, {4, 0}, p).holds);
}

TEST(CertifyPair, Black3MatchesEnumerationOnFixture) {
  const auto fx = load_fixture(testing::fixture_path("black3_r2.txt"));
  const auto f = fx.field();
  const auto p = params(BlackMode::black3, 0.2, 1);
  for (const auto& e : fx.expect("black3")) {
    const Coord a = Coord::parse(e[1]), b = Coord::parse(e[2]);
    const auto rep = certify_pair(f, a, b, p, Interiority::assume);
    const auto oracle = brute_force(f, f.box().vertex_id(a), f.box().vertex_id(b), 24);
    EXPECT_EQ(rep.clauses[1].lhs, std::stod(e[3]));
    EXPECT_EQ(oracle.count(), std::stoull(e[4]));
    EXPECT_EQ(rep.size, std::stod(e[5]));
    EXPECT_EQ(rep.clauses[2].lhs, std::stod(e[6]));
    EXPECT_EQ(rep.size, static_cast<double>(oracle.max_len()));
    EXPECT_EQ(rep.clauses[2].lhs, static_cast<double>(oracle.min_heavy(f, 3)));
  }
}

TEST(CertifyPair, Black3EqualsBlackOnUniqueGeodesics) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto f = generic_field(12, seed);
    testing::Gen g(seed);
    for (int i = 0; i < 20; ++i) {
      const Coord a{static_cast<int>(g.integer(-2, 2)), static_cast<int>(g.integer(-2, 2))};
      const Coord b{static_cast<int>(g.integer(-2, 2)), static_cast<int>(g.integer(-2, 2))};
      if (a == b) continue;
      for (double delta : {0.05, 0.2, 0.6}) {
        const auto r1 = certify_pair(f, a, b, params(BlackMode::black, delta, 0.4));
        const auto r3 = certify_pair(f, a, b, params(BlackMode::black3, delta, 0.4));
        EXPECT_EQ(r1.holds, r3.holds);
        EXPECT_EQ(r1.first_failing, r3.first_failing);
        EXPECT_EQ(r1.size, r3.size);
        for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(r1.clauses[c].lhs, r3.clauses[c].lhs);
      }
    }
  }
}

TEST(CertifyPair, MonotoneInDelta) {
  for (auto mode : {BlackMode::black, BlackMode::black3}) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const auto f = generic_field(10, seed);
      testing::Gen g(seed, 1);
      for (int i = 0; i < 15; ++i) {
        const Coord a{static_cast<int>(g.integer(-2, 2)), static_cast<int>(g.integer(-2, 2))};
        const Coord b{static_cast<int>(g.integer(-2, 2)), static_cast<int>(g.integer(-2, 2))};
        if (a == b) continue;
        bool failed = false;
        for (double delta = 0.02; delta < 1.5; delta += 0.04) {
          const auto rep = certify_pair(f, a, b, params(mode, delta, 0.5));
          for (std::size_t c = 0; c < 3; ++c) {
            // the left-hand sides do not depend on delta
            EXPECT_EQ(rep.clauses[c].lhs, certify_pair(f, a, b, params(mode, 0.02, 0.5)).clauses[c].lhs);
          }
          if (failed) {
            EXPECT_FALSE(rep.holds) << "delta " << delta;
          }
          failed = failed || !rep.holds;
        }
      }
    }
  }
}

// Direct evaluation of the scan dichotomy through certify_pair.
std::uint64_t failures_by_pairs(const WeightField& f, std::int64_t k, const BlackParams& p, const ScanOptions& o) {
  BlackParams q = p;
  q.mode = event_mode(o.event);
  const auto& box = f.box();
  const double bound = o.short_bound == ShortBound::half_k ? k / 2.0 : q.delta * static_cast<double>(k);
  std::uint64_t failed = 0;
  for (std::size_t i = 0; i < box.vertex_count(); ++i) {
    const Coord a = box.coord(static_cast<VertexId>(i));
    if (a.linf_norm() > k) continue;
    const auto dag = geodesic_dag(f, a);
    for (std::size_t j = 0; j < box.vertex_count(); ++j) {
      const Coord b = box.coord(static_cast<VertexId>(j));
      if (b.linf_norm() > k || a == b) continue;
      const auto l1 = lattice_metrics(a, b).l1;
      if (l1 * l1 >= k) {
        try {
          failed += !certify_pair(f, a, b, q, Interiority::assume).holds;
        } catch (const NonUniqueGeodesic&) {
          ++failed;
        }
        continue;
      }
      double size = 0;
      if (q.mode == BlackMode::black3) {
        size = static_cast<double>(extremal_path_lengths(dag, f, b).second);
      } else if (q.size_reading == SizeReading::path_count) {
        size = static_cast<double>(count_optimal_paths(dag, f, b).value);
      } else {
        if (count_optimal_paths(dag, f, b).value != 1) {
          ++failed;
          continue;
        }
        size = static_cast<double>(extremal_path_lengths(dag, f, b).first);
      }
      failed += !(size <= bound);
    }
  }
  return failed;
}

TEST(ScanEvent, EqualsConjunctionOfPairs) {
  struct Case {
    WeightField field;
    EventKind event;
    ShortBound bound;
  };
  std::vector<Case> cases;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    cases.push_back({generic_field(4, seed), EventKind::c, ShortBound::delta_k});
    cases.push_back({generic_field(4, seed), EventKind::c3, ShortBound::half_k});
    cases.push_back({testing::family_field(Family::table3, 2, 4, seed), EventKind::c3, ShortBound::delta_k});
    cases.push_back({testing::family_field(Family::table3, 2, 4, seed), EventKind::c, ShortBound::half_k});
  }
  for (const auto& c : cases) {
    for (double delta : {0.1, 0.3}) {
      const auto p = params(BlackMode::black, delta, 0.3);
      ScanOptions o;
      o.event = c.event;
      o.short_bound = c.bound;
      const auto rep = scan_event(c.field, 2, p, o);
      EXPECT_EQ(rep.pairs_total, 25u * 24u);
      EXPECT_EQ(rep.pairs_checked, rep.pairs_total);
      EXPECT_FALSE(rep.subsampled);
      EXPECT_EQ(rep.pairs_failed, failures_by_pairs(c.field, 2, p, o));
      EXPECT_EQ(rep.passed, rep.pairs_failed == 0);
    }
  }
}

TEST(ScanEvent, UnitWeightsFail) {
  const auto f = unit_field(8);
  ScanOptions o;
  o.event = EventKind::c3;
  const auto rep = scan_event(f, 4, params(BlackMode::black3, 0.1, 1), o);
  EXPECT_FALSE(rep.passed);
  ASSERT_FALSE(rep.violations.empty());
  EXPECT_LE(rep.violations.size(), o.max_recorded_violations);
}

TEST(ScanEvent, FullBudgetMatchesUnlimited) {
  const auto f = generic_field(6, 9);
  const auto p = params(BlackMode::black, 0.1, 0.3);
  ScanOptions all;
  const auto a = scan_event(f, 3, p, all);
  ScanOptions exact = all;
  exact.pair_budget = a.pairs_total;
  const auto b = scan_event(f, 3, p, exact);
  EXPECT_EQ(a.pairs_failed, b.pairs_failed);
  EXPECT_EQ(a.passed, b.passed);
  EXPECT_FALSE(b.subsampled);
  ScanOptions small = all;
  small.pair_budget = a.pairs_total / 4;
  small.subsample_seed = 3;
  const auto c = scan_event(f, 3, p, small);
  EXPECT_TRUE(c.subsampled);
  EXPECT_LE(c.pairs_checked, *small.pair_budget);
  EXPECT_LE(c.pairs_failed, a.pairs_failed);
  EXPECT_EQ(c.pairs_failed, scan_event(f, 3, p, small).pairs_failed);
}

TEST(ScanEvent, Errors) {
  const auto f = generic_field(5, 1);
  const auto p = params(BlackMode::black, 0.1, 0.3);
  EXPECT_THROW(scan_event(f, 3, p), InteriorityViolation);
  ScanOptions o;
  o.pair_budget = 0;
  EXPECT_THROW(scan_event(f, 2, p, o), std::invalid_argument);
  EXPECT_THROW(scan_event(f, 0, p), std::invalid_argument);
}

TEST(ScanEvent, CsvRow) {
  ScanReport r;
  r.k = 4;
  r.pairs_checked = 10;
  r.pairs_failed = 0;
  EXPECT_EQ(scan_csv_header(), "k,pairs_checked,pairs_failed,first_failure_a,first_failure_b,clause");
  EXPECT_EQ(scan_csv_row(r), "4,10,0,,,");
  r.pairs_failed = 1;
  r.violations.push_back({{0, 1}, {2, -1}, "clause3"});
  EXPECT_EQ(scan_csv_row(r), "4,10,1,\"(0,1)\",\"(2,-1)\",clause3");
}

TEST(Names, RoundTrip) {
  for (auto m : {BlackMode::black, BlackMode::black2, BlackMode::black3}) EXPECT_EQ(parse_black_mode(to_string(m)), m);
  for (auto e : {EventKind::c, EventKind::c2, EventKind::c3}) EXPECT_EQ(parse_event_kind(to_string(e)), e);
  for (auto s : {ShortBound::half_k, ShortBound::delta_k}) EXPECT_EQ(parse_short_bound(to_string(s)), s);
  for (auto s : {SizeReading::path_length, SizeReading::path_count}) EXPECT_EQ(parse_size_reading(to_string(s)), s);
  EXPECT_THROW(parse_black_mode("grey"), std::invalid_argument);
}

}  // namespace
}  // namespace fpp
