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
#include <span>
#include <vector>

#include "fpp/harness/config.hpp"

namespace fpp::harness {

inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
  double lower = 0;
  double upper = 0;
};

/// Wilson score interval for `successes` out of `trials` at normal quantile z.
/// Throws std::invalid_argument when trials == 0 or successes > trials.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

struct Moments {
  std::uint64_t n = 0;
  double mean = 0;
  /// Sample standard deviation (n - 1 denominator); 0 when n < 2.
  double sd = 0;
  double min = 0;
  double max = 0;

  double stderr_mean() const;
};

/// Two-pass moments, summed in input order.
Moments moments(std::span<const double> xs);

struct DecayPoint {
  /// Scale: k, or |x|_1.
  double scale = 0;
  double probability = 0;
  /// Trial count behind the probability; 0 when unknown.
  std::uint64_t trials = 0;
};

struct DecayFit {
  /// -slope of log p against the abscissa.
  double rate = 0;
  double intercept = 0;
  Interval rate_ci;
  /// rate_ci excludes 0 on the positive side.
  bool sign_test_passed = false;
  /// Weighted fit with binomial variances (all trial counts known), else
  /// ordinary least squares with a Student-t interval.
  bool weighted = false;
  std::vector<double> abscissae;
  std::vector<double> probabilities;
  /// Points whose zero probability was replaced by the Wilson upper bound.
  std::vector<bool> replaced;
};

double abscissa_value(Abscissa a, double scale);

/// Least-squares fit of log p_k = intercept - rate * x_k. Needs >= 3 points
/// with distinct abscissae and p in [0, 1]; p = 0 is allowed only with a
/// trial count and is replaced by the Wilson upper bound. Throws
/// std::invalid_argument otherwise.
DecayFit estimate_decay(std::span<const DecayPoint> series, Abscissa abscissa, double confidence = 0.95);

/// p_0 >= p_1 >= ... with p_0 > p_last.
bool is_decreasing(std::span<const double> ps);
/// p_0 >= p_1 >= ...
bool is_non_increasing(std::span<const double> ps);

}  // namespace fpp::harness
