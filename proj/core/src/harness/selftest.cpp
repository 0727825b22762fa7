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

#include "fpp/harness/selftest.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "fpp/fpt.hpp"
#include "fpp/geodesics.hpp"
#include "fpp/harness/parallel.hpp"
#include "fpp/oracle.hpp"
#include "fpp/rng.hpp"

namespace fpp::harness {

namespace {

std::string path_list(const Box& box, const std::vector<std::vector<VertexId>>& paths) {
  std::ostringstream ss;
  for (std::size_t p = 0; p < paths.size(); ++p) {
    if (p) ss << " | ";
    for (std::size_t i = 0; i < paths[p].size(); ++i) {
      if (i) ss << ' ';
      ss << box.coord(paths[p][i]).to_plain();
    }
  }
  return ss.str();
}

std::string index_list(const std::vector<std::int64_t>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(xs[i]);
  }
  return s;
}

double heavy_threshold(SelftestFamily f) {
  switch (f) {
    case SelftestFamily::unit: return 1.0;
    case SelftestFamily::bernoulli: return 1.0;
    case SelftestFamily::three_point: return 2.0;
    case SelftestFamily::discrete_uniform: return 0.5;
  }
  return 1.0;
}

struct FixtureOutcome {
  std::vector<Cell> row;
  std::uint64_t pairs = 0;
  std::uint64_t rays = 0;
  std::vector<SelftestMismatch> mismatches;
};

FixtureOutcome run_fixture(int index, const SelftestOptions& opt) {
  const auto family = static_cast<SelftestFamily>(index % 4);
  const int radius = (index / 4) % 2 == 0 ? std::min(2, opt.max_radius) : opt.max_radius;
  const std::uint64_t seed = trial_seed(opt.seed, static_cast<std::uint64_t>(index));
  const WeightField field = selftest_field(family, radius, seed);
  const Box& box = field.box();
  const auto nv = box.vertex_count();
  const std::int64_t cap = static_cast<std::int64_t>(nv) - 1;
  StreamRng rng(seed, 0x73656c66ULL);
  const auto s = static_cast<VertexId>(rng.below(nv));
  auto s2 = static_cast<VertexId>(rng.below(nv));
  if (s2 == s) s2 = static_cast<VertexId>((static_cast<std::size_t>(s) + 1) % nv);

  FixtureOutcome out;
  auto mismatch = [&](const std::string& what, VertexId a, VertexId b, const std::string& want, const std::string& got) {
    out.mismatches.push_back({index, what, box.coord(a).to_plain(), b == kNoVertex ? "" : box.coord(b).to_plain(), want, got});
  };

  const auto dag = geodesic_dag(field, box.coord(s));
  DagStatsOptions so;
  so.heavy_threshold = heavy_threshold(family);
  const DagStatistics stats(dag, field, so);
  for (std::size_t tv = 0; tv < nv; ++tv) {
    const auto t = static_cast<VertexId>(tv);
    if (t == s) continue;
    ++out.pairs;
    const auto truth = brute_force(field, s, t, cap);
    if (truth.partial) mismatch("partial-enumeration", s, t, "complete", "partial");
    const auto ps = stats.at(t);
    auto check = [&](const char* what, auto want, auto got) {
      if (want != got) mismatch(what, s, t, std::to_string(want), std::to_string(got));
    };
    check("time", truth.time, dag.times().exact_time(t));
    check("count", truth.count(), ps.count.value);
    check("min_len", truth.min_len(), ps.min_len);
    check("max_len", truth.max_len(), ps.max_len);
    check("min_heavy", truth.min_heavy(field, *so.heavy_threshold), *ps.min_heavy);
    auto paths = enumerate_optimal_paths(dag, t);
    std::sort(paths.begin(), paths.end());
    if (paths != truth.paths) mismatch("path_set", s, t, path_list(box, truth.paths), path_list(box, paths));
  }

  std::uint64_t degenerate = 0;
  const auto ray_dag = geodesic_dag(field, box.coord(s2));
  for (const auto& ray : boundary_rays(ray_dag)) {
    if (ray.index_of(s) > 0) {
      ++degenerate;
      continue;
    }
    ++out.rays;
    const auto got = bad_indices(ray, dag, field).bad_indices;
    const auto want = oracle_bad_indices(field, ray.vertices, s, cap);
    if (got != want) mismatch("bad_indices", s2, ray.terminal(), index_list(want), index_list(got));
  }
  out.row = {static_cast<std::int64_t>(index), to_string(family), static_cast<std::int64_t>(radius), seed,
             box.coord(s).to_string(), box.coord(s2).to_string(), out.pairs, out.rays, degenerate,
             static_cast<std::uint64_t>(out.mismatches.size())};
  return out;
}

}  // namespace

std::string to_string(SelftestFamily f) {
  switch (f) {
    case SelftestFamily::unit: return "unit";
    case SelftestFamily::bernoulli: return "bernoulli";
    case SelftestFamily::three_point: return "three-point";
    case SelftestFamily::discrete_uniform: return "discrete-uniform";
  }
  return "unit";
}

WeightField selftest_field(SelftestFamily family, int radius, std::uint64_t seed) {
  const auto box = build_box(2, radius);
  switch (family) {
    case SelftestFamily::unit:
      return WeightField::sample(box, Distribution::point_mass(1), WeightMode::exact, seed, 0);
    case SelftestFamily::bernoulli:
      return WeightField::sample(box, Distribution::two_point(0, 1, 0.3), WeightMode::exact, seed, 0);
    case SelftestFamily::three_point:
      return WeightField::sample(box, Distribution::finite_table({{1, 0.4}, {2, 0.35}, {5, 0.25}}), WeightMode::exact,
                                 seed, 0);
    case SelftestFamily::discrete_uniform:
      return WeightField::sample(box, Distribution::uniform(0, 1), WeightMode::exact, seed, 3);
  }
  throw std::invalid_argument("selftest_field: unknown family");
}

SelftestReport run_selftest(const SelftestOptions& options) {
  if (options.fixtures < 0) throw std::invalid_argument("run_selftest: negative fixture count");
  if (options.max_radius < 1 || options.max_radius > 3) throw std::invalid_argument("run_selftest: radius must be in [1,3]");
  const auto outcomes = parallel_map<FixtureOutcome>(
      0, static_cast<std::uint64_t>(options.fixtures), options.workers,
      [&](std::uint64_t i) { return run_fixture(static_cast<int>(i), options); });
  SelftestReport rep;
  rep.fixtures = options.fixtures;
  rep.table.columns = {"fixture", "family", "radius", "seed", "source", "ray_source", "pairs", "rays",
                       "degenerate_rays", "mismatches"};
  for (const auto& o : outcomes) {
    rep.pairs += o.pairs;
    rep.rays += o.rays;
    rep.mismatches.insert(rep.mismatches.end(), o.mismatches.begin(), o.mismatches.end());
    rep.table.add(o.row);
  }
  return rep;
}

nlohmann::json SelftestReport::to_json() const {
  nlohmann::json mm = nlohmann::json::array();
  for (const auto& m : mismatches) {
    mm.push_back({{"fixture", m.fixture},
                  {"quantity", m.quantity},
                  {"a", m.a},
                  {"b", m.b},
                  {"expected", m.expected},
                  {"got", m.got}});
  }
  return {{"fixtures", fixtures}, {"pairs", pairs}, {"rays", rays}, {"passed", passed()}, {"mismatches", mm}};
}

}  // namespace fpp::harness
