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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fpp/fpt.hpp"
#include "fpp/lattice.hpp"
#include "fpp/weights.hpp"

namespace fpp {

enum class BlackMode { black, black2, black3 };
/// How the size #O(a,b) is read in black mode: the length of the unique
/// optimal path, or the number of optimal paths.
enum class SizeReading { path_length, path_count };

std::string to_string(BlackMode mode);
BlackMode parse_black_mode(const std::string& text);
std::string to_string(SizeReading reading);
SizeReading parse_size_reading(const std::string& text);

struct BlackParams {
  BlackMode mode = BlackMode::black;
  double delta = 0.1;
  /// M. black2 reads it as the window length and requires an integer.
  double m = 1.0;
  /// black2 only.
  double alpha2 = 0.0;
  SizeReading size_reading = SizeReading::path_length;

  double heavy_threshold() const { return 3 * m; }
  std::int64_t window() const;
  /// Throws std::invalid_argument. With a distribution, also checks
  /// F^- < alpha2 < F^+ for black2.
  void validate(const Distribution* dist = nullptr) const;
};

enum class Interiority {
  /// Both endpoints at l_inf distance >= |a-b|_1 from the box complement;
  /// violations throw InteriorityViolation.
  enforce,
  /// Skip the check (the caller guarantees a sufficient margin).
  assume,
};

struct Clause {
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
};

struct CertificateReport {
  VertexId a = kNoVertex;
  VertexId b = kNoVertex;
  BlackMode mode = BlackMode::black;
  SizeReading size_reading = SizeReading::path_length;
  /// The size the clauses scale with: #O(a,b) or max length.
  double size = 0;
  /// |a-b|_1 >= delta*size, t(a,b) >= delta*size, heavy >= delta*size.
  std::array<Clause, 3> clauses{};
  bool holds = false;
  /// 1-based index of the first failing clause, 0 when all hold.
  int first_failing = 0;
};

/// Evaluates the mode's three clauses. black and black2 need a unique
/// optimal path (NonUniqueGeodesic otherwise).
CertificateReport certify_pair(const WeightField& field, const Coord& a, const Coord& b, const BlackParams& params,
                               Interiority interiority = Interiority::enforce);

/// Same, reusing a geodesic DAG from a (with statistics carrying the heavy
/// threshold 3M).
CertificateReport certify_with_dag(const GeodesicDag& dag, const DagStatistics& stats, const WeightField& field,
                                   VertexId b, const BlackParams& params);

/// The event whose pair dichotomy is scanned: C (black), C2 (black2) or C3 (black3).
enum class EventKind { c, c2, c3 };

std::string to_string(EventKind kind);
EventKind parse_event_kind(const std::string& text);
BlackMode event_mode(EventKind kind);

/// Bound on the short-pair size: k/2 or delta*k.
enum class ShortBound { half_k, delta_k };

std::string to_string(ShortBound bound);
ShortBound parse_short_bound(const std::string& text);

struct ScanOptions {
  EventKind event = EventKind::c;
  ShortBound short_bound = ShortBound::delta_k;
  /// Maximum number of ordered pairs to check; absent means all. Beyond the
  /// budget, sources are subsampled uniformly without replacement and every
  /// pair from a chosen source is checked, so each pair has the same
  /// inclusion probability.
  std::optional<std::uint64_t> pair_budget;
  std::uint64_t subsample_seed = 0;
  /// Violations recorded verbatim (the failure count is always exact).
  std::size_t max_recorded_violations = 64;
};

struct ScanViolation {
  Coord a;
  Coord b;
  /// "clause1".."clause3", "short" or "non_unique".
  std::string clause;
};

struct ScanReport {
  std::int64_t k = 0;
  EventKind event = EventKind::c;
  std::uint64_t pairs_total = 0;
  std::uint64_t pairs_checked = 0;
  std::uint64_t pairs_failed = 0;
  bool subsampled = false;
  bool passed = true;
  std::vector<ScanViolation> violations;
};

/// Checks every ordered pair a != b of [-k,k]^d: black (per the event's
/// mode) when |a-b|_1 >= sqrt(k), size <= the short bound otherwise.
/// Requires box radius >= 2k.
ScanReport scan_event(const WeightField& field, std::int64_t k, const BlackParams& params,
                      const ScanOptions& options = {});

/// CSV row k,pairs_checked,pairs_failed,first_failure_a,first_failure_b,clause.
std::string scan_csv_header();
std::string scan_csv_row(const ScanReport& report);

}  // namespace fpp
