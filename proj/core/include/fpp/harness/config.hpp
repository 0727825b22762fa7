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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fpp/certify.hpp"
#include "fpp/weights.hpp"

namespace fpp::harness {

enum class ExperimentKind {
  passage_time_mean,
  uniqueness,
  metric,
  heavy_density,
  length_bound,
  speed_bound,
  black_scan,
  gray_count,
  resampling,
};

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& text);

enum class Abscissa { sqrt_k, k, l1 };

std::string to_string(Abscissa a);
Abscissa parse_abscissa(const std::string& text);

/// Kind-specific knobs. Each experiment reads the subset it needs; the
/// defaults are the values the command-line tool uses.
struct ExperimentParams {
  double delta = 0.1;
  double m = 1.0;
  double alpha2 = 0.0;
  std::vector<std::int64_t> k_list{8, 16, 32};
  int n = 4;
  std::int64_t horizon = 0;
  /// Failure threshold: c for heavy-density, C0 for length-bound.
  double threshold = 0.0;
  /// Pair budget per scan (black-scan); absent scans every pair.
  std::optional<std::uint64_t> pair_budget;
  EventKind event = EventKind::c;
  ShortBound short_bound = ShortBound::half_k;
  SizeReading size_reading = SizeReading::path_length;
  /// n-box tuning (gray-count).
  double delta_speed = 0.1;
  double r = 4.0;
  /// gray-count: |x|_1 of the target (L, 0, ..., 0).
  std::int64_t distance = 48;
  /// resampling: stop once this many qualifying instances were seen.
  std::optional<std::uint64_t> target_qualifying;
  Abscissa abscissa = Abscissa::k;
};

struct OutputPaths {
  std::string dir;
  std::string trials_csv = "trials.csv";
  std::string summary_json = "summary.json";
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::passage_time_mean;
  int dimension = 2;
  int radius = 10;
  Distribution distribution = Distribution::exponential(1);
  WeightMode mode = WeightMode::exact;
  int grid_exponent = kDefaultGridExponent;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  /// Absent: FPP_WORKERS, else 1.
  std::optional<unsigned> workers;
  ExperimentParams params;
  OutputPaths output;

  /// Throws ConfigError naming the offending key.
  static ExperimentConfig from_json(const nlohmann::json& doc);
  static ExperimentConfig load(const std::string& path);
  /// Every key, including defaults; from_json(to_json()) is the identity.
  nlohmann::json to_json() const;
};

/// Structural validation against the schema shipped in schema/: types,
/// ranges, enumerations, and no unknown keys at any level. Returns the
/// list of problems, empty when the document is valid.
std::vector<std::string> validate_config(const nlohmann::json& doc);

/// FPP_WORKERS when set to a positive integer, else 1. Throws ConfigError
/// on a malformed value.
unsigned default_workers();
unsigned resolve_workers(const ExperimentConfig& config);

}  // namespace fpp::harness
