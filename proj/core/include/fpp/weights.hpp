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
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fpp/lattice.hpp"

namespace fpp {

enum class DistributionKind {
  point_mass,
  two_point,
  finite_table,
  uniform,
  exponential,
  shifted_exponential,
};

std::string to_string(DistributionKind kind);

/// Common law F of the i.i.d. edge weights.
class Distribution {
 public:
  static Distribution point_mass(double value);
  /// P(tau = low) = p_low, P(tau = high) = 1 - p_low.
  static Distribution two_point(double low, double high, double p_low);
  /// (value, probability) atoms; probabilities must sum to 1.
  static Distribution finite_table(std::vector<std::pair<double, double>> atoms);
  static Distribution uniform(double lo, double hi);
  static Distribution exponential(double mean);
  static Distribution shifted_exponential(double shift, double mean);

  DistributionKind kind() const noexcept { return kind_; }
  const std::vector<double>& parameters() const noexcept { return params_; }
  /// Atoms for the discrete kinds, sorted by value with zero masses removed.
  const std::vector<std::pair<double, double>>& atoms() const noexcept { return atoms_; }

  double f_minus() const noexcept { return f_minus_; }
  /// +infinity for unbounded support.
  double f_plus() const noexcept { return f_plus_; }
  double atom_at_f_minus() const noexcept { return atom_minus_; }
  double atom_at_f_plus() const noexcept { return atom_plus_; }
  bool is_continuous() const noexcept;

  /// Inverse-CDF transform of u in [0,1).
  double quantile(double u) const;
  double cdf(double x) const;
  double mean() const;

  /// Compact text form, e.g. "exponential:1" (the CLI --dist syntax).
  std::string describe() const;
  static Distribution parse(const std::string& text);

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  Distribution() = default;
  void finish_atoms();

  DistributionKind kind_ = DistributionKind::point_mass;
  std::vector<double> params_;
  std::vector<std::pair<double, double>> atoms_;
  double f_minus_ = 0;
  double f_plus_ = 0;
  double atom_minus_ = 0;
  double atom_plus_ = 0;
};

/// Critical probabilities for bond percolation and oriented bond
/// percolation in dimension d. These are configuration values.
struct PercolationThresholds {
  double p_c = 0.5;
  double vec_p_c = 0.6447;
  std::string provenance;

  /// Shipped defaults for d in {2,3,4}; p_c(2) = 1/2 is exact, the others
  /// are published numerical estimates. Throws for other dimensions.
  static PercolationThresholds defaults(int dimension);
  void validate() const;
};

struct Usefulness {
  bool useful = false;
  std::string explanation;
};

/// P(tau = F^-) < p_c when F^- = 0, < vec_p_c otherwise.
Usefulness usefulness_check(const Distribution& dist, const PercolationThresholds& thresholds);

enum class WeightMode { exact, floating };

std::string to_string(WeightMode mode);
WeightMode parse_weight_mode(const std::string& text);

inline constexpr int kDefaultGridExponent = 40;
inline constexpr std::uint64_t kResampleRetryBudget = 1'000'000;

/// Real-valued acceptance region for resampled values. Bounds are compared
/// against the represented (grid-rounded in exact mode) value.
struct Acceptance {
  double lower = -std::numeric_limits<double>::infinity();
  bool lower_closed = true;
  double upper = std::numeric_limits<double>::infinity();
  bool upper_closed = true;

  static Acceptance less_than(double bound) { return {-std::numeric_limits<double>::infinity(), true, bound, false}; }
  static Acceptance at_least(double bound) { return {bound, true, std::numeric_limits<double>::infinity(), true}; }
  /// Degenerate region [v, v]: the value is pinned rather than drawn.
  static Acceptance exactly(double value) { return {value, true, value, true}; }

  bool accepts(double x) const;
  bool is_point() const { return lower == upper && lower_closed && upper_closed; }
};

struct ResampleSpec {
  std::vector<EdgeId> edges;
  std::uint64_t resample_seed = 0;
  std::optional<Acceptance> acceptance;
};

/// Immutable assignment of non-negative weights to the edges of a box.
///
/// Exact mode stores integer numerators on the grid 2^-g, so that every
/// passage-time comparison downstream is an integer comparison; floating
/// mode stores doubles. The value of edge e is a pure function of
/// (master_seed, e, resample counter of e, resample seed).
class WeightField {
 public:
  static WeightField sample(BoxPtr box, const Distribution& dist, WeightMode mode,
                            std::uint64_t master_seed,
                            int grid_exponent = kDefaultGridExponent);
  /// A field with explicit exact weights (fixtures, dumps).
  static WeightField from_numerators(BoxPtr box, std::vector<std::int64_t> numerators,
                                     int grid_exponent);
  static WeightField from_values(BoxPtr box, std::vector<double> values);

  const Box& box() const noexcept { return *box_; }
  const BoxPtr& box_ptr() const noexcept { return box_; }
  WeightMode mode() const noexcept { return mode_; }
  int grid_exponent() const noexcept { return grid_exponent_; }
  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t generation() const noexcept { return generation_; }
  const std::optional<Distribution>& distribution() const noexcept { return dist_; }

  std::size_t edge_count() const noexcept { return box_->edge_count(); }
  std::span<const std::int64_t> numerators() const noexcept { return numerators_; }
  std::span<const double> values() const noexcept { return values_; }
  std::uint32_t resample_count(EdgeId e) const { return counters_[static_cast<std::size_t>(e)]; }

  /// Real value of edge e (numerator * 2^-g in exact mode).
  double weight(EdgeId e) const;
  /// Exact-mode numerator; throws in floating mode.
  std::int64_t numerator(EdgeId e) const;
  /// Threshold test tau_e >= threshold in the field's own arithmetic.
  bool at_least(EdgeId e, double threshold) const;
  /// Represent a real value in this field's arithmetic (rounded to the grid
  /// in exact mode) and return it as a real.
  double represent(double x) const;
  /// Largest admissible exact numerator; sums over simple paths stay < 2^62.
  std::int64_t max_numerator() const;

  /// tau^(A): fresh draws on spec.edges, everything else unchanged.
  WeightField resample(const ResampleSpec& spec) const;

  friend bool operator==(const WeightField& a, const WeightField& b);

 private:
  WeightField() = default;
  std::int64_t to_grid(double x) const;
  double draw(EdgeId e, std::uint32_t counter, std::uint64_t resample_seed,
              std::uint64_t attempt) const;

  BoxPtr box_;
  WeightMode mode_ = WeightMode::exact;
  int grid_exponent_ = kDefaultGridExponent;
  std::uint64_t master_seed_ = 0;
  std::uint64_t generation_ = 0;
  std::optional<Distribution> dist_;
  std::vector<std::int64_t> numerators_;
  std::vector<double> values_;
  std::vector<std::uint32_t> counters_;
};

}  // namespace fpp
