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

#include "fpp/geodesics.hpp"
#include "fpp/harness/config.hpp"
#include "fpp/harness/stats.hpp"
#include "fpp/harness/table.hpp"
#include "fpp/weights.hpp"

namespace fpp::harness {

struct RunResult {
  ExperimentConfig config;
  /// One row per trial (per trial and scale for the multi-scale kinds).
  Table trials;
  nlohmann::json summary;
};

/// Runs config.trials seeded trials of config.kind. Trial i samples its
/// field from trial_seed(config.seed, i); rows are folded in trial order,
/// so the result does not depend on the worker count. Resampling configs
/// with params.target_qualifying instead run trials 0, 1, ... until that
/// many instances qualified, stopping at config.trials when it is nonzero
/// and at 1000 * target otherwise.
RunResult run_trials(const ExperimentConfig& config);

/// Writes trials CSV and summary JSON under config.output.dir. Throws Error
/// when the directory is not writable.
void write_outputs(const RunResult& result);

/// The field for trial i.
WeightField trial_field(const ExperimentConfig& config, std::uint64_t trial, int radius);

/// A qualifying instance for the single-edge resampling argument: a ray
/// Gamma from v with t(0, v) <= M and an edge eta = {Gamma[j-1], Gamma[j]}
/// with tau_eta >= 3M.
struct ResamplingCase {
  VertexId origin = kNoVertex;
  VertexId v = kNoVertex;
  Ray ray;
  /// 1-based, >= 2.
  std::int64_t j = 0;
  EdgeId eta = -1;
  /// M; the assertions assume the resampled tau_eta is below it.
  double m = 1.0;
};

/// Picks a qualifying instance with a generator keyed by `seed`: v uniform
/// among vertices other than the origin with t(0, v) <= M, then (ray, j)
/// uniform among the qualifying edges of the boundary rays from v.
std::optional<ResamplingCase> find_resampling_case(const WeightField& field, const Coord& origin, double m,
                                                   std::uint64_t seed);

struct ResamplingCheck {
  /// Ray indices l with j < l <= ray length.
  std::int64_t indices = 0;
  /// (i) t^eta(0, Gamma[l]) < t(0, Gamma[l]).
  std::int64_t pass_i = 0;
  /// (ii) every optimal path 0 -> Gamma[l] under tau^eta uses eta.
  std::int64_t pass_ii = 0;
  /// (iii) Gamma[j..l] is optimal under tau^eta.
  std::int64_t pass_iii = 0;
  /// (iv) Gamma[l] is not bad for the ray under tau^eta.
  std::int64_t pass_iv = 0;
  /// First failing index per assertion, 0 when none failed.
  std::int64_t first_fail_i = 0;
  std::int64_t first_fail_ii = 0;
  std::int64_t first_fail_iii = 0;
  std::int64_t first_fail_iv = 0;
  /// The resampled tau_eta is not below M, so nothing is asserted; every
  /// index counts as passed.
  bool vacuous = false;

  bool all_passed() const {
    return pass_i == indices && pass_ii == indices && pass_iii == indices && pass_iv == indices;
  }
};

/// Evaluates the assertions for one instance and one resampled field.
ResamplingCheck check_resampling(const WeightField& field, const WeightField& resampled, const ResamplingCase& rc);

struct Counterexample {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  /// Endpoints of eta as printed coordinates.
  std::string edge_a;
  std::string edge_b;
  std::string assertion;
  std::int64_t index = 0;
};

struct ResamplingReport {
  std::uint64_t trials_run = 0;
  std::uint64_t qualifying = 0;
  std::uint64_t indices_checked = 0;
  std::uint64_t pass_i = 0;
  std::uint64_t pass_ii = 0;
  std::uint64_t pass_iii = 0;
  std::uint64_t pass_iv = 0;
  std::vector<Counterexample> counterexamples;

  bool all_passed() const { return counterexamples.empty(); }
  nlohmann::json to_json() const;
};

/// run_trials on a resampling config, with the aggregate report.
ResamplingReport resampling_experiment(const ExperimentConfig& config);
ResamplingReport resampling_report(const RunResult& result);

/// Failure probabilities per scale from a multi-scale run (columns k and
/// failed), ready for estimate_decay.
std::vector<DecayPoint> failure_series(const Table& trials);

/// estimate_decay as JSON (rate, intercept, 95% interval, sign test, flags);
/// null for fewer than 3 points, {"error": ...} for a degenerate series.
nlohmann::json decay_summary(const std::vector<DecayPoint>& series, Abscissa abscissa);

}  // namespace fpp::harness
