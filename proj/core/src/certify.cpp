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

#include "fpp/certify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "fpp/error.hpp"
#include "fpp/rng.hpp"

namespace fpp {

std::string to_string(BlackMode mode) {
  switch (mode) {
    case BlackMode::black: return "black";
    case BlackMode::black2: return "black2";
    case BlackMode::black3: return "black3";
  }
  return "black";
}

BlackMode parse_black_mode(const std::string& text) {
  if (text == "black") return BlackMode::black;
  if (text == "black2") return BlackMode::black2;
  if (text == "black3") return BlackMode::black3;
  throw std::invalid_argument("unknown black mode '" + text + "' (expected black|black2|black3)");
}

std::string to_string(SizeReading reading) {
  return reading == SizeReading::path_length ? "path-length" : "path-count";
}

SizeReading parse_size_reading(const std::string& text) {
  if (text == "path-length") return SizeReading::path_length;
  if (text == "path-count") return SizeReading::path_count;
  throw std::invalid_argument("unknown size reading '" + text + "' (expected path-length|path-count)");
}

std::int64_t BlackParams::window() const {
  const double r = std::round(m);
  if (r != m || m < 1) throw std::invalid_argument("black2 needs a positive integer M as window length");
  return static_cast<std::int64_t>(r);
}

void BlackParams::validate(const Distribution* dist) const {
  if (!(delta > 0) || !std::isfinite(delta)) throw std::invalid_argument("black parameters: delta must be positive");
  if (!(m > 0) || !std::isfinite(m)) throw std::invalid_argument("black parameters: M must be positive");
  if (mode == BlackMode::black2) {
    (void)window();
    if (dist && !(dist->f_minus() < alpha2 && alpha2 < dist->f_plus())) {
      throw std::invalid_argument("black2 needs F^- < alpha2 < F^+");
    }
  }
}

namespace {

void check_interior(const Box& box, const Coord& a, const Coord& b) {
  const std::int64_t l1 = lattice_metrics(a, b).l1;
  const VertexId ia = box.vertex_id(a);
  const VertexId ib = box.vertex_id(b);
  if (box.boundary_margin(ia) < l1 || box.boundary_margin(ib) < l1) {
    throw InteriorityViolation("pair " + a.to_string() + ", " + b.to_string() +
                               " is closer to the box boundary than |a-b|_1 = " + std::to_string(l1));
  }
}

std::int64_t heavy_on_path(const std::vector<VertexId>& path, const WeightField& field, double threshold) {
  std::int64_t h = 0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (field.at_least(field.box().edge_between(path[i - 1], path[i]), threshold)) ++h;
  }
  return h;
}

}  // namespace

CertificateReport certify_with_dag(const GeodesicDag& dag, const DagStatistics& stats, const WeightField& field,
                                   VertexId b, const BlackParams& params) {
  const Box& box = field.box();
  const PathStats ps = stats.at(b);
  CertificateReport rep;
  rep.a = dag.source();
  rep.b = b;
  rep.mode = params.mode;
  rep.size_reading = params.size_reading;

  double heavy = 0;
  if (params.mode == BlackMode::black3) {
    if (!ps.min_heavy) throw std::invalid_argument("certify: statistics lack the heavy threshold 3M");
    rep.size = static_cast<double>(ps.max_len);
    heavy = static_cast<double>(*ps.min_heavy);
  } else {
    if (ps.count.value != 1 || ps.count.saturated) {
      throw NonUniqueGeodesic("certify: optimal path " + box.coord(dag.source()).to_string() + " -> " +
                              box.coord(b).to_string() + " is not unique");
    }
    const std::vector<VertexId> path = canonical_path(dag, b);
    const auto len = static_cast<double>(path.size() - 1);
    rep.size = params.size_reading == SizeReading::path_length ? len : static_cast<double>(ps.count.value);
    heavy = params.mode == BlackMode::black
                ? static_cast<double>(heavy_on_path(path, field, params.heavy_threshold()))
                : static_cast<double>(count_heavy_windows(path, field, params.window(), params.alpha2));
  }
  const double rhs = params.delta * rep.size;
  const auto l1 = static_cast<double>(lattice_metrics(box.coord(dag.source()), box.coord(b)).l1);
  rep.clauses[0] = {l1, rhs, l1 >= rhs};
  rep.clauses[1] = {dag.times().time(b), rhs, dag.times().at_least(b, rhs)};
  rep.clauses[2] = {heavy, rhs, heavy >= rhs};
  rep.holds = true;
  for (int i = 0; i < 3; ++i) {
    if (!rep.clauses[static_cast<std::size_t>(i)].holds) {
      rep.holds = false;
      rep.first_failing = i + 1;
      break;
    }
  }
  return rep;
}

CertificateReport certify_pair(const WeightField& field, const Coord& a, const Coord& b, const BlackParams& params,
                               Interiority interiority) {
  params.validate(field.distribution() ? &*field.distribution() : nullptr);
  const Box& box = field.box();
  if (interiority == Interiority::enforce) check_interior(box, a, b);
  ShortestPathOptions opt;
  opt.targets = {box.vertex_id(b)};
  const GeodesicDag dag = geodesic_dag(field, a, opt);
  DagStatsOptions so;
  so.heavy_threshold = params.heavy_threshold();
  const DagStatistics stats(dag, field, so);
  return certify_with_dag(dag, stats, field, box.vertex_id(b), params);
}

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::c: return "C";
    case EventKind::c2: return "C2";
    case EventKind::c3: return "C3";
  }
  return "C";
}

EventKind parse_event_kind(const std::string& text) {
  if (text == "C" || text == "c") return EventKind::c;
  if (text == "C2" || text == "c2") return EventKind::c2;
  if (text == "C3" || text == "c3") return EventKind::c3;
  throw std::invalid_argument("unknown event '" + text + "' (expected C|C2|C3)");
}

BlackMode event_mode(EventKind kind) {
  switch (kind) {
    case EventKind::c: return BlackMode::black;
    case EventKind::c2: return BlackMode::black2;
    case EventKind::c3: return BlackMode::black3;
  }
  return BlackMode::black;
}

std::string to_string(ShortBound bound) { return bound == ShortBound::half_k ? "half-k" : "delta-k"; }

ShortBound parse_short_bound(const std::string& text) {
  if (text == "half-k") return ShortBound::half_k;
  if (text == "delta-k") return ShortBound::delta_k;
  throw std::invalid_argument("unknown short bound '" + text + "' (expected half-k|delta-k)");
}

namespace {

/// Floyd's algorithm: s distinct values of [0, n) in ascending order.
std::vector<std::uint64_t> sample_without_replacement(std::uint64_t n, std::uint64_t s, StreamRng& rng) {
  std::unordered_set<std::uint64_t> chosen;
  for (std::uint64_t j = n - s; j < n; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ScanReport scan_event(const WeightField& field, std::int64_t k, const BlackParams& base, const ScanOptions& options) {
  if (k < 1) throw std::invalid_argument("scan_event: k must be >= 1");
  if (options.pair_budget && *options.pair_budget == 0) {
    throw std::invalid_argument("scan_event: pair budget must be positive (omit it to check every pair)");
  }
  BlackParams params = base;
  params.mode = event_mode(options.event);
  params.validate(field.distribution() ? &*field.distribution() : nullptr);
  const Box& box = field.box();
  if (box.radius() < 2 * k) {
    throw InteriorityViolation("scan_event: box radius " + std::to_string(box.radius()) + " is below 2k = " +
                               std::to_string(2 * k));
  }

  // Vertices of [-k,k]^d in ascending id order.
  std::vector<VertexId> cube;
  for (std::size_t v = 0; v < box.vertex_count(); ++v) {
    if (box.linf_norm(static_cast<VertexId>(v)) <= k) cube.push_back(static_cast<VertexId>(v));
  }
  const auto points = static_cast<std::uint64_t>(cube.size());

  ScanReport rep;
  rep.k = k;
  rep.event = options.event;
  rep.pairs_total = points * (points - 1);

  std::vector<std::uint64_t> source_idx;
  if (!options.pair_budget || rep.pairs_total <= *options.pair_budget) {
    source_idx.resize(points);
    for (std::uint64_t i = 0; i < points; ++i) source_idx[i] = i;
  } else {
    const std::uint64_t s = std::max<std::uint64_t>(1, *options.pair_budget / (points - 1));
    StreamRng rng(options.subsample_seed, static_cast<std::uint64_t>(k));
    source_idx = sample_without_replacement(points, s, rng);
    rep.subsampled = true;
  }

  const double bound = options.short_bound == ShortBound::half_k ? static_cast<double>(k) / 2
                                                                  : params.delta * static_cast<double>(k);
  auto record = [&](VertexId a, VertexId b, std::string clause) {
    ++rep.pairs_failed;
    if (rep.violations.size() < options.max_recorded_violations) {
      rep.violations.push_back({box.coord(a), box.coord(b), std::move(clause)});
    }
  };

  ShortestPathOptions spo;
  spo.targets = cube;
  DagStatsOptions so;
  so.heavy_threshold = params.heavy_threshold();
  for (std::uint64_t si : source_idx) {
    const VertexId a = cube[si];
    const GeodesicDag dag = build_geodesic_dag(shortest_paths(field, a, spo), field, Tolerance::for_mode(field.mode()));
    const DagStatistics stats(dag, field, so);
    const Coord ca = box.coord(a);
    for (VertexId b : cube) {
      if (b == a) continue;
      ++rep.pairs_checked;
      const std::int64_t l1 = lattice_metrics(ca, box.coord(b)).l1;
      const bool far = l1 * l1 >= k;
      if (far) {
        try {
          const CertificateReport c = certify_with_dag(dag, stats, field, b, params);
          if (!c.holds) record(a, b, "clause" + std::to_string(c.first_failing));
        } catch (const NonUniqueGeodesic&) {
          record(a, b, "non_unique");
        }
        continue;
      }
      const PathStats ps = stats.at(b);
      double size = 0;
      if (params.mode == BlackMode::black3) {
        size = static_cast<double>(ps.max_len);
      } else if (params.size_reading == SizeReading::path_count) {
        size = ps.count.saturated ? static_cast<double>(kCountSaturation) : static_cast<double>(ps.count.value);
      } else {
        if (ps.count.value != 1 || ps.count.saturated) {
          record(a, b, "non_unique");
          continue;
        }
        size = static_cast<double>(ps.min_len);
      }
      if (!(size <= bound)) record(a, b, "short");
    }
  }
  rep.passed = rep.pairs_failed == 0;
  return rep;
}

std::string scan_csv_header() { return "k,pairs_checked,pairs_failed,first_failure_a,first_failure_b,clause"; }

std::string scan_csv_row(const ScanReport& r) {
  std::string row = std::to_string(r.k) + "," + std::to_string(r.pairs_checked) + "," + std::to_string(r.pairs_failed) + ",";
  if (r.violations.empty()) return row + ",,";
  const ScanViolation& v = r.violations.front();
  // Coordinates contain commas; quote per RFC 4180.
  return row + "\"" + v.a.to_string() + "\",\"" + v.b.to_string() + "\"," + v.clause;
}

}  // namespace fpp
