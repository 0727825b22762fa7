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

#include <benchmark/benchmark.h>

#include "fpp/fpt.hpp"
#include "fpp/geodesics.hpp"
#include "fpp/weights.hpp"

namespace {

fpp::WeightField field(int radius, fpp::WeightMode mode) {
  return fpp::WeightField::sample(fpp::build_box(2, radius), fpp::Distribution::exponential(1), mode, 17);
}

void BM_ShortestPathsExact(benchmark::State& state) {
  const auto f = field(static_cast<int>(state.range(0)), fpp::WeightMode::exact);
  const auto origin = f.box().vertex_id(fpp::Coord(2));
  for (auto _ : state) benchmark::DoNotOptimize(fpp::shortest_paths(f, origin));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.box().vertex_count()));
}
BENCHMARK(BM_ShortestPathsExact)->Arg(16)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_ShortestPathsFloat(benchmark::State& state) {
  const auto f = field(static_cast<int>(state.range(0)), fpp::WeightMode::floating);
  const auto origin = f.box().vertex_id(fpp::Coord(2));
  for (auto _ : state) benchmark::DoNotOptimize(fpp::shortest_paths(f, origin));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.box().vertex_count()));
}
BENCHMARK(BM_ShortestPathsFloat)->Arg(16)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_DagStatistics(benchmark::State& state) {
  const auto f = field(static_cast<int>(state.range(0)), fpp::WeightMode::exact);
  const auto dag = fpp::geodesic_dag(f, fpp::Coord(2));
  for (auto _ : state) benchmark::DoNotOptimize(fpp::DagStatistics(dag, f));
}
BENCHMARK(BM_DagStatistics)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_BoundaryRays(benchmark::State& state) {
  const auto f = field(static_cast<int>(state.range(0)), fpp::WeightMode::exact);
  const auto dag = fpp::geodesic_dag(f, fpp::Coord(2));
  for (auto _ : state) benchmark::DoNotOptimize(fpp::boundary_rays(dag));
}
BENCHMARK(BM_BoundaryRays)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
