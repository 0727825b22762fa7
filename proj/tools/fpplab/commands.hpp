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

#include "fpp/harness/config.hpp"
#include "fpp/weights.hpp"

namespace fpplab {

/// Flags shared by every subcommand. Unset optionals leave the config file
/// (or the built-in default) in charge.
struct CommonFlags {
  std::string config;
  std::optional<int> dim;
  std::optional<int> radius;
  std::optional<std::string> dist;
  std::optional<std::string> mode;
  std::optional<int> grid;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<unsigned> workers;
  std::string out;
  /// Trial index of the sampled field for single-field commands.
  std::uint64_t trial = 0;
  /// A field dump to use instead of sampling.
  std::string field;
};

/// Certificate and experiment knobs; unset values keep the config's.
struct ParamFlags {
  std::optional<double> delta;
  std::optional<double> m;
  std::optional<double> alpha2;
  std::optional<std::string> size_reading;
  std::optional<std::string> event;
  std::optional<std::string> short_bound;
  std::optional<std::uint64_t> pair_budget;
  std::optional<int> n;
  std::optional<double> delta_speed;
  std::optional<double> r;
  std::optional<std::int64_t> horizon;
  std::optional<double> threshold;
  std::optional<std::int64_t> distance;
  std::optional<std::uint64_t> target_qualifying;
  std::optional<std::string> abscissa;
  std::vector<std::int64_t> k_list;
};

fpp::harness::ExperimentConfig build_config(const CommonFlags& common, const ParamFlags& params,
                                            fpp::harness::ExperimentKind default_kind);

int cmd_sample(const CommonFlags& common);
int cmd_fpt(const CommonFlags& common, const std::string& source);
int cmd_rays(const CommonFlags& common, const ParamFlags& params, const std::string& source);
int cmd_badpoints(const CommonFlags& common, const std::string& source, const std::string& probe,
                  const std::string& badness);
int cmd_certify(const CommonFlags& common, const ParamFlags& params, const std::string& a, const std::string& b,
                std::optional<std::int64_t> scan_k, const std::string& black_mode, bool assume_interior);
int cmd_nbox(const CommonFlags& common, const ParamFlags& params, const std::string& source,
             const std::string& target);
int cmd_resample(const CommonFlags& common, const ParamFlags& params);
int cmd_decay(const CommonFlags& common, const ParamFlags& params, const std::string& series);
int cmd_selftest(const CommonFlags& common, int fixtures, int max_radius);
int cmd_run(const CommonFlags& common, const ParamFlags& params, bool validate_only);

}  // namespace fpplab
