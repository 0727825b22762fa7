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

#include "fpp/certify.hpp"
#include "fpp/weights.hpp"

namespace {

fpp::WeightField field(int radius) {
  return fpp::WeightField::sample(fpp::build_box(2, radius), fpp::Distribution::exponential(1),
                                  fpp::WeightMode::exact, 23);
}

void BM_CertifyPair(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto f = field(4 * k);
  const fpp::BlackParams params{fpp::BlackMode::black3, 0.05, 0.01};
  for (auto _ : state) {
    benchmark::DoNotOptimize(fpp::certify_pair(f, fpp::Coord{-k / 2, 0}, fpp::Coord{k / 2, k / 4}, params));
  }
}
BENCHMARK(BM_CertifyPair)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_ScanEvent(benchmark::State& state) {
  const auto k = state.range(0);
  const auto f = field(static_cast<int>(2 * k));
  const fpp::BlackParams params{fpp::BlackMode::black, 0.05, 0.01};
  fpp::ScanOptions options;
  options.short_bound = fpp::ShortBound::half_k;
  options.pair_budget = static_cast<std::uint64_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(fpp::scan_event(f, k, params, options));
}
BENCHMARK(BM_ScanEvent)->Args({4, 1000})->Args({8, 1000})->Args({16, 1000})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
