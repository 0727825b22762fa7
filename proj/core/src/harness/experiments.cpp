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

#include "fpp/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <set>

#include "fpp/certify.hpp"
#include "fpp/error.hpp"
#include "fpp/fpt.hpp"
#include "fpp/harness/parallel.hpp"
#include "fpp/nbox.hpp"
#include "fpp/rng.hpp"

namespace fpp::harness {

namespace {

using nlohmann::json;

Coord axis_point(int dim, std::int64_t k) {
  Coord c(dim);
  c[0] = static_cast<int>(k);
  return c;
}

Coord origin_of(int dim) { return Coord(dim); }

/// t(v) <= x in the field's own arithmetic.
bool time_at_most(const PassageTimes& pt, VertexId v, double x) {
  if (!pt.reached(v)) return false;
  if (pt.mode() == WeightMode::exact) {
    return pt.exact_time(v) <= static_cast<std::int64_t>(std::floor(std::ldexp(x, pt.grid_exponent())));
  }
  return pt.time(v) <= x;
}

std::int64_t max_k(const ExperimentConfig& c) {
  if (c.params.k_list.empty()) throw ConfigError("params.k_list must not be empty");
  return *std::max_element(c.params.k_list.begin(), c.params.k_list.end());
}

void require_radius(const ExperimentConfig& c, std::int64_t needed, const std::string& why) {
  if (c.radius < needed) {
    throw ConfigError("radius " + std::to_string(c.radius) + " too small: " + why + " needs >= " +
                      std::to_string(needed));
  }
}

using Rows = std::vector<std::vector<Cell>>;

struct Kind {
  std::vector<std::string> columns;
  std::function<Rows(const ExperimentConfig&, std::uint64_t)> trial;
};

Cell i64(std::int64_t v) { return Cell{v}; }
Cell u64(std::uint64_t v) { return Cell{v}; }

// --- passage-time-mean -------------------------------------------------------

Rows passage_mean_trial(const ExperimentConfig& c, std::uint64_t i) {
  const auto field = trial_field(c, i, c.radius);
  ShortestPathOptions opt;
  for (auto k : c.params.k_list) opt.targets.push_back(field.box().vertex_id(axis_point(c.dimension, k)));
  const auto pt = shortest_paths(field, origin_of(c.dimension), opt);
  Rows rows;
  for (std::size_t n = 0; n < c.params.k_list.size(); ++n) {
    const auto k = c.params.k_list[n];
    const double t = pt.time(opt.targets[n]);
    rows.push_back({u64(i), u64(field.master_seed()), i64(k), t, t / static_cast<double>(k)});
  }
  return rows;
}

// --- uniqueness --------------------------------------------------------------

Rows uniqueness_trial(const ExperimentConfig& c, std::uint64_t i) {
  const auto field = trial_field(c, i, c.radius);
  const auto dag = geodesic_dag(field, origin_of(c.dimension));
  std::int64_t tied = 0;
  std::size_t max_pred = 0;
  for (std::size_t v = 0; v < field.box().vertex_count(); ++v) {
    const auto n = dag.optimal_predecessor_count(static_cast<VertexId>(v));
    max_pred = std::max(max_pred, n);
    if (n >= 2) ++tied;
  }
  return {{u64(i), u64(field.master_seed()), tied, static_cast<std::int64_t>(max_pred)}};
}

// --- metric ------------------------------------------------------------------

Rows metric_trial(const ExperimentConfig& c, std::uint64_t i) {
  if (c.mode != WeightMode::exact) throw ConfigError("metric experiment needs exact mode");
  const auto field = trial_field(c, i, c.radius);
  const Box& box = field.box();
  const std::size_t nv = box.vertex_count();
  std::vector<std::int64_t> t(nv * nv);
  for (std::size_t s = 0; s < nv; ++s) {
    const auto pt = shortest_paths(field, static_cast<VertexId>(s));
    std::copy(pt.exact_times().begin(), pt.exact_times().end(), t.begin() + static_cast<std::ptrdiff_t>(s * nv));
  }
  std::int64_t identity = 0, symmetry = 0, triangle = 0;
  for (std::size_t x = 0; x < nv; ++x) {
    if (t[x * nv + x] != 0) ++identity;
    for (std::size_t y = x + 1; y < nv; ++y) {
      if (t[x * nv + y] != t[y * nv + x]) ++symmetry;
    }
  }
  for (std::size_t x = 0; x < nv; ++x) {
    const std::int64_t* tx = &t[x * nv];
    for (std::size_t y = 0; y < nv; ++y) {
      const std::int64_t a = tx[y];
      const std::int64_t* ty = &t[y * nv];
      std::int64_t bad = 0;
      for (std::size_t z = 0; z < nv; ++z) bad += (a + ty[z] < tx[z]);
      triangle += bad;
    }
  }

  // Sub-path optimality of extracted canonical paths.
  std::vector<VertexId> sources;
  if (nv <= 125) {
    for (std::size_t s = 0; s < nv; ++s) sources.push_back(static_cast<VertexId>(s));
  } else {
    StreamRng rng(field.master_seed(), 0x6d6574726963ULL);
    std::set<VertexId> chosen;
    while (chosen.size() < 16) chosen.insert(static_cast<VertexId>(rng.below(nv)));
    sources.assign(chosen.begin(), chosen.end());
  }
  std::int64_t paths = 0, subpaths = 0, sub_bad = 0;
  for (VertexId s : sources) {
    const auto dag = geodesic_dag(field, box.coord(s));
    for (std::size_t z = 0; z < nv; ++z) {
      const auto path = canonical_path(dag, static_cast<VertexId>(z));
      ++paths;
      std::vector<std::int64_t> pre(path.size(), 0);
      for (std::size_t q = 1; q < path.size(); ++q) {
        pre[q] = pre[q - 1] + field.numerator(box.edge_between(path[q - 1], path[q]));
      }
      for (std::size_t a = 0; a < path.size(); ++a) {
        for (std::size_t b = a + 1; b < path.size(); ++b) {
          ++subpaths;
          const auto pa = static_cast<std::size_t>(path[a]);
          const auto pb = static_cast<std::size_t>(path[b]);
          if (pre[b] - pre[a] != t[pa * nv + pb]) ++sub_bad;
        }
      }
    }
  }
  const auto triples = static_cast<std::int64_t>(nv * nv * nv);
  return {{u64(i), u64(field.master_seed()), i64(c.dimension), static_cast<std::int64_t>(nv), triples, identity,
           symmetry, triangle, paths, subpaths, sub_bad}};
}

// --- heavy-density / length-bound ---------------------------------------------

Rows geodesic_scale_trial(const ExperimentConfig& c, std::uint64_t i, bool heavy) {
  require_radius(c, max_k(c) + 1, "targets (k,0)");
  const auto field = trial_field(c, i, c.radius);
  ShortestPathOptions opt;
  for (auto k : c.params.k_list) opt.targets.push_back(field.box().vertex_id(axis_point(c.dimension, k)));
  const auto pt = shortest_paths(field, origin_of(c.dimension), opt);
  const auto dag = build_geodesic_dag(pt, field, Tolerance::for_mode(field.mode()));
  DagStatsOptions so;
  so.heavy_threshold = c.params.m;
  const DagStatistics st(dag, field, so);
  Rows rows;
  for (std::size_t n = 0; n < c.params.k_list.size(); ++n) {
    const auto k = c.params.k_list[n];
    const auto ps = st.at(opt.targets[n]);
    const double kd = static_cast<double>(k);
    const double ratio = heavy ? static_cast<double>(*ps.min_heavy) / kd : static_cast<double>(ps.max_len) / kd;
    const bool failed = heavy ? ratio < c.params.threshold : ratio > c.params.threshold;
    rows.push_back({u64(i), u64(field.master_seed()), i64(k), pt.time(opt.targets[n]), i64(*ps.min_heavy),
                    i64(ps.min_len), i64(ps.max_len), ratio, failed});
  }
  return rows;
}

// --- speed-bound ---------------------------------------------------------------

Rows speed_trial(const ExperimentConfig& c, std::uint64_t i) {
  require_radius(c, max_k(c) + 1, "targets (k,0)");
  const auto field = trial_field(c, i, c.radius);
  ShortestPathOptions opt;
  for (auto k : c.params.k_list) opt.targets.push_back(field.box().vertex_id(axis_point(c.dimension, k)));
  const auto pt = shortest_paths(field, origin_of(c.dimension), opt);
  Rows rows;
  for (std::size_t n = 0; n < c.params.k_list.size(); ++n) {
    const auto k = c.params.k_list[n];
    const double bound = c.params.delta * static_cast<double>(k);
    const bool failed = !pt.at_least(opt.targets[n], bound);
    const double t = pt.time(opt.targets[n]);
    rows.push_back({u64(i), u64(field.master_seed()), i64(k), t, t / static_cast<double>(k), failed});
  }
  return rows;
}

// --- black-scan ----------------------------------------------------------------

Rows black_scan_trial(const ExperimentConfig& c, std::uint64_t i) {
  BlackParams bp;
  bp.mode = event_mode(c.params.event);
  bp.delta = c.params.delta;
  bp.m = c.params.m;
  bp.alpha2 = c.params.alpha2;
  bp.size_reading = c.params.size_reading;
  Rows rows;
  for (auto k : c.params.k_list) {
    const int radius = std::max<int>(c.radius, static_cast<int>(2 * k));
    const auto field = trial_field(c, i, radius);
    ScanOptions so;
    so.event = c.params.event;
    so.short_bound = c.params.short_bound;
    so.pair_budget = c.params.pair_budget;
    so.subsample_seed = derive_bits(field.master_seed(), {0x7363616eULL, static_cast<std::uint64_t>(k)});
    so.max_recorded_violations = 1;
    const auto rep = scan_event(field, k, bp, so);
    std::string a, b, clause;
    if (!rep.violations.empty()) {
      a = rep.violations[0].a.to_string();
      b = rep.violations[0].b.to_string();
      clause = rep.violations[0].clause;
    }
    rows.push_back({u64(i), u64(field.master_seed()), i64(k), u64(rep.pairs_total), u64(rep.pairs_checked),
                    u64(rep.pairs_failed), !rep.passed, a, b, clause});
  }
  return rows;
}

// --- gray-count ----------------------------------------------------------------

NBoxTuning gray_tuning(const ExperimentConfig& c) {
  NBoxTuning tu;
  tu.delta_speed = c.params.delta_speed;
  tu.r = c.params.r;
  const double m = std::round(c.params.m);
  if (m != c.params.m || m < 1) throw ConfigError("gray-count reads params.m as a window length (positive integer)");
  tu.m = static_cast<std::int64_t>(m);
  tu.alpha2 = c.params.alpha2;
  tu.law = c.distribution;
  return tu;
}

Rows gray_trial(const ExperimentConfig& c, std::uint64_t i) {
  require_radius(c, c.params.distance + 1, "target (distance,0)");
  const auto field = trial_field(c, i, c.radius);
  const auto tu = gray_tuning(c);
  GrayCount g;
  bool non_unique = false;
  try {
    g = count_gray(field, origin_of(c.dimension), axis_point(c.dimension, c.params.distance), c.params.n, tu);
  } catch (const NonUniqueGeodesic&) {
    non_unique = true;
  }
  return {{u64(i), u64(field.master_seed()), g.boxes_classified, g.boxes_skipped, g.black, g.white, g.gray,
           non_unique, g.gray >= 1}};
}

// --- resampling ----------------------------------------------------------------

Rows resampling_trial(const ExperimentConfig& c, std::uint64_t i) {
  const auto field = trial_field(c, i, c.radius);
  const std::uint64_t seed = field.master_seed();
  const auto rc = find_resampling_case(field, origin_of(c.dimension), c.params.m, derive_bits(seed, {1}));
  if (!rc) {
    return {{u64(i), u64(seed), false, std::string(), std::string(), i64(0), i64(0), std::string(), std::string(),
             0.0, 0.0, i64(0), i64(0), i64(0), i64(0), i64(0), i64(0), i64(0), i64(0), i64(0)}};
  }
  ResampleSpec spec;
  spec.edges = {rc->eta};
  spec.resample_seed = derive_bits(seed, {2});
  spec.acceptance = Acceptance::less_than(c.params.m);
  const auto resampled = field.resample(spec);
  const auto chk = check_resampling(field, resampled, *rc);
  const Box& box = field.box();
  const Edge e = box.edge(rc->eta);
  return {{u64(i), u64(seed), true, box.coord(rc->v).to_string(), box.coord(rc->ray.terminal()).to_string(),
           i64(rc->j), i64(rc->ray.length()), e.a().to_string(), e.b().to_string(), field.weight(rc->eta),
           resampled.weight(rc->eta), i64(chk.indices), i64(chk.pass_i), i64(chk.pass_ii), i64(chk.pass_iii),
           i64(chk.pass_iv), i64(chk.first_fail_i), i64(chk.first_fail_ii), i64(chk.first_fail_iii),
           i64(chk.first_fail_iv)}};
}

const Kind& kind_info(ExperimentKind kind) {
  static const std::vector<std::string> scale_cols = {"trial", "seed", "k", "time", "min_heavy",
                                                      "min_len", "max_len", "ratio", "failed"};
  static const std::map<ExperimentKind, Kind> kinds = {
      {ExperimentKind::passage_time_mean, {{"trial", "seed", "k", "time", "ratio"}, passage_mean_trial}},
      {ExperimentKind::uniqueness, {{"trial", "seed", "tied_vertices", "max_predecessors"}, uniqueness_trial}},
      {ExperimentKind::metric,
       {{"trial", "seed", "dimension", "vertices", "triples", "identity_violations", "symmetry_violations",
         "triangle_violations", "paths", "subpaths", "subpath_violations"},
        metric_trial}},
      {ExperimentKind::heavy_density,
       {scale_cols, [](const ExperimentConfig& c, std::uint64_t i) { return geodesic_scale_trial(c, i, true); }}},
      {ExperimentKind::length_bound,
       {scale_cols, [](const ExperimentConfig& c, std::uint64_t i) { return geodesic_scale_trial(c, i, false); }}},
      {ExperimentKind::speed_bound, {{"trial", "seed", "k", "time", "ratio", "failed"}, speed_trial}},
      {ExperimentKind::black_scan,
       {{"trial", "seed", "k", "pairs_total", "pairs_checked", "pairs_failed", "failed", "first_failure_a",
         "first_failure_b", "clause"},
        black_scan_trial}},
      {ExperimentKind::gray_count,
       {{"trial", "seed", "boxes_classified", "boxes_skipped", "black", "white", "gray", "non_unique", "has_gray"},
        gray_trial}},
      {ExperimentKind::resampling,
       {{"trial", "seed", "qualifying", "v", "ray_terminal", "j", "ray_length", "eta_a", "eta_b", "old_weight",
         "new_weight", "indices", "pass_i", "pass_ii", "pass_iii", "pass_iv", "first_fail_i", "first_fail_ii",
         "first_fail_iii", "first_fail_iv"},
        resampling_trial}},
  };
  return kinds.at(kind);
}

bool is_scale_kind(ExperimentKind k) {
  return k == ExperimentKind::heavy_density || k == ExperimentKind::length_bound ||
         k == ExperimentKind::speed_bound || k == ExperimentKind::black_scan;
}

json interval_json(const Interval& iv) { return json::array({iv.lower, iv.upper}); }

json series_summary(const Table& t, Abscissa abscissa) {
  json out;
  const auto series = failure_series(t);
  json pts = json::array();
  std::vector<double> ps;
  for (const auto& s : series) {
    const auto failures = static_cast<std::uint64_t>(std::llround(s.probability * static_cast<double>(s.trials)));
    pts.push_back({{"k", static_cast<std::int64_t>(s.scale)},
                   {"trials", s.trials},
                   {"failures", failures},
                   {"probability", s.probability},
                   {"wilson95", interval_json(wilson_interval(failures, s.trials))}});
    ps.push_back(s.probability);
  }
  out["series"] = pts;
  out["decreasing"] = is_decreasing(ps);
  out["non_increasing"] = is_non_increasing(ps);
  out["decay"] = decay_summary(series, abscissa);
  return out;
}

json summarise(const ExperimentConfig& c, const Table& t) {
  json s;
  json cfg = c.to_json();
  cfg.erase("output");
  cfg.erase("workers");
  s["config"] = cfg;
  s["experiment"] = to_string(c.kind);
  std::set<std::int64_t> trial_ids;
  for (double v : t.numbers("trial")) trial_ids.insert(static_cast<std::int64_t>(v));
  s["trials"] = trial_ids.size();
  s["rows"] = t.rows.size();
  if (t.rows.empty()) return s;

  switch (c.kind) {
    case ExperimentKind::passage_time_mean: {
      json per = json::array();
      const auto ks = t.numbers("k");
      const auto ratio = t.numbers("ratio");
      for (auto k : c.params.k_list) {
        std::vector<double> xs;
        for (std::size_t r = 0; r < ks.size(); ++r) {
          if (ks[r] == static_cast<double>(k)) xs.push_back(ratio[r]);
        }
        const auto m = moments(xs);
        per.push_back({{"k", k}, {"n", m.n}, {"mean_ratio", m.mean}, {"sd", m.sd}, {"stderr", m.stderr_mean()},
                       {"min", m.min}, {"max", m.max}});
      }
      s["per_k"] = per;
      break;
    }
    case ExperimentKind::uniqueness: {
      const auto tied = t.numbers("tied_vertices");
      json seeds = json::array();
      std::int64_t total = 0;
      for (std::size_t r = 0; r < tied.size(); ++r) {
        if (tied[r] > 0) {
          seeds.push_back({{"trial", std::get<std::uint64_t>(t.rows[r][0])},
                           {"seed", std::get<std::uint64_t>(t.rows[r][1])},
                           {"tied_vertices", static_cast<std::int64_t>(tied[r])}});
        }
        total += static_cast<std::int64_t>(tied[r]);
      }
      s["tied_seeds"] = seeds.size();
      s["tied_vertices_total"] = total;
      s["tied"] = seeds;
      break;
    }
    case ExperimentKind::metric: {
      for (const char* col : {"triples", "identity_violations", "symmetry_violations", "triangle_violations", "paths",
                              "subpaths", "subpath_violations"}) {
        double sum = 0;
        for (double v : t.numbers(col)) sum += v;
        s[col] = static_cast<std::int64_t>(sum);
      }
      break;
    }
    case ExperimentKind::gray_count: {
      const auto has = t.numbers("has_gray");
      const auto gray = t.numbers("gray");
      const auto nu = t.numbers("non_unique");
      std::uint64_t hits = 0, non_unique = 0;
      for (double v : has) hits += v > 0;
      for (double v : nu) non_unique += v > 0;
      s["with_gray"] = hits;
      s["fraction_with_gray"] = static_cast<double>(hits) / static_cast<double>(has.size());
      s["wilson95"] = interval_json(wilson_interval(hits, has.size()));
      s["majority"] = 2 * hits > has.size();
      s["mean_gray"] = moments(gray).mean;
      s["non_unique"] = non_unique;
      break;
    }
    case ExperimentKind::resampling: break;
    default: {
      const auto series = series_summary(t, c.params.abscissa);
      for (auto it = series.begin(); it != series.end(); ++it) s[it.key()] = it.value();
      break;
    }
  }
  return s;
}

}  // namespace

WeightField trial_field(const ExperimentConfig& config, std::uint64_t trial, int radius) {
  const auto box = build_box(config.dimension, radius);
  return WeightField::sample(box, config.distribution, config.mode, trial_seed(config.seed, trial),
                             config.grid_exponent);
}

std::optional<ResamplingCase> find_resampling_case(const WeightField& field, const Coord& origin, double m,
                                                   std::uint64_t seed) {
  const Box& box = field.box();
  const VertexId o = box.vertex_id(origin);
  const auto pt = shortest_paths(field, o);
  std::vector<VertexId> near;
  for (std::size_t v = 0; v < box.vertex_count(); ++v) {
    const auto id = static_cast<VertexId>(v);
    if (id != o && time_at_most(pt, id, m)) near.push_back(id);
  }
  if (near.empty()) return std::nullopt;
  StreamRng rng(seed, 0);
  const VertexId v = near[rng.below(near.size())];
  const auto dag = geodesic_dag(field, box.coord(v));
  const auto rays = boundary_rays(dag);
  std::vector<std::pair<std::size_t, std::int64_t>> options;
  for (std::size_t r = 0; r < rays.size(); ++r) {
    for (std::int64_t j = 2; j <= rays[r].length(); ++j) {
      if (field.at_least(box.edge_between(rays[r].at(j - 1), rays[r].at(j)), 3 * m)) options.emplace_back(r, j);
    }
  }
  if (options.empty()) return std::nullopt;
  const auto [r, j] = options[rng.below(options.size())];
  ResamplingCase rc;
  rc.origin = o;
  rc.v = v;
  rc.ray = rays[r];
  rc.j = j;
  rc.eta = box.edge_between(rc.ray.at(j - 1), rc.ray.at(j));
  rc.m = m;
  return rc;
}

ResamplingCheck check_resampling(const WeightField& field, const WeightField& resampled, const ResamplingCase& rc) {
  const Box& box = field.box();
  const auto old_times = shortest_paths(field, rc.origin);
  const auto dag = geodesic_dag(resampled, box.coord(rc.origin));
  const auto& new_times = dag.times();
  const VertexId gj = rc.ray.at(rc.j);
  const auto from_j = shortest_paths(resampled, gj);
  const auto bad = bad_indices(rc.ray, dag, resampled);
  const std::set<std::int64_t> bad_set(bad.bad_indices.begin(), bad.bad_indices.end());
  const bool exact = field.mode() == WeightMode::exact;
  const Tolerance tol = Tolerance::for_mode(field.mode());

  ResamplingCheck chk;
  chk.vacuous = !(resampled.weight(rc.eta) < rc.m);
  if (chk.vacuous) {
    chk.indices = std::max<std::int64_t>(0, rc.ray.length() - rc.j);
    chk.pass_i = chk.pass_ii = chk.pass_iii = chk.pass_iv = chk.indices;
    return chk;
  }
  std::int64_t wsum = 0;
  double fsum = 0;
  AvoidQuery avoid;
  avoid.forbidden_edges = {rc.eta};
  for (std::int64_t l = rc.j + 1; l <= rc.ray.length(); ++l) {
    const VertexId x = rc.ray.at(l);
    const EdgeId step = box.edge_between(rc.ray.at(l - 1), x);
    ++chk.indices;
    auto record = [&](bool ok, std::int64_t& pass, std::int64_t& first) {
      if (ok) {
        ++pass;
      } else if (first == 0) {
        first = l;
      }
    };
    const bool i_ok = exact ? new_times.exact_time(x) < old_times.exact_time(x) : new_times.time(x) < old_times.time(x);
    record(i_ok, chk.pass_i, chk.first_fail_i);
    record(!exists_avoiding_optimal_path(dag, x, avoid).exists, chk.pass_ii, chk.first_fail_ii);
    bool iii_ok = false;
    if (exact) {
      wsum += resampled.numerator(step);
      iii_ok = wsum == from_j.exact_time(x);
    } else {
      fsum += resampled.weight(step);
      const double t = from_j.time(x);
      iii_ok = fsum <= t + tol.absolute + tol.relative * t;
    }
    record(iii_ok, chk.pass_iii, chk.first_fail_iii);
    record(bad_set.count(l) == 0, chk.pass_iv, chk.first_fail_iv);
  }
  return chk;
}

RunResult run_trials(const ExperimentConfig& config) {
  const Kind& kind = kind_info(config.kind);
  if (is_scale_kind(config.kind)) max_k(config);
  const unsigned workers = resolve_workers(config);
  RunResult res;
  res.config = config;
  res.trials.columns = kind.columns;
  auto body = [&](std::uint64_t i) { return kind.trial(config, i); };

  const bool hunt = config.kind == ExperimentKind::resampling && config.params.target_qualifying.has_value();
  if (!hunt) {
    const auto results = parallel_map<Rows>(0, config.trials, workers, body);
    for (const auto& rows : results) {
      for (const auto& r : rows) res.trials.add(r);
    }
  } else {
    // Keep sampling in fixed-size blocks until enough instances qualify;
    // truncation is by trial index, so the block size does not matter.
    const std::uint64_t target = *config.params.target_qualifying;
    const std::uint64_t cap = config.trials > 0 ? config.trials : 1000 * target;
    const std::uint64_t block = std::max<std::uint64_t>(64, 8ULL * workers);
    const std::size_t qcol = res.trials.column("qualifying");
    std::uint64_t qualifying = 0;
    for (std::uint64_t begin = 0; begin < cap && qualifying < target; begin += block) {
      const auto results = parallel_map<Rows>(begin, std::min(cap, begin + block), workers, body);
      for (const auto& rows : results) {
        if (qualifying >= target) break;
        for (const auto& r : rows) {
          res.trials.add(r);
          if (std::get<bool>(r[qcol])) ++qualifying;
        }
      }
    }
  }
  res.summary = summarise(config, res.trials);
  if (config.kind == ExperimentKind::resampling) {
    const auto rep = resampling_report(res);
    res.summary["report"] = rep.to_json();
    if (hunt) {
      res.summary["target_qualifying"] = *config.params.target_qualifying;
      res.summary["target_reached"] = rep.qualifying >= *config.params.target_qualifying;
    }
  }
  return res;
}

void write_outputs(const RunResult& result) {
  namespace fs = std::filesystem;
  const fs::path dir = result.config.output.dir.empty() ? fs::path(".") : fs::path(result.config.output.dir);
  write_text_file((dir / result.config.output.trials_csv).string(), to_csv(result.trials));
  write_text_file((dir / result.config.output.summary_json).string(), dump_json(result.summary));
}

json ResamplingReport::to_json() const {
  json ce = json::array();
  for (const auto& c : counterexamples) {
    ce.push_back({{"trial", c.trial},
                  {"seed", c.seed},
                  {"edge", json::array({c.edge_a, c.edge_b})},
                  {"assertion", c.assertion},
                  {"index", c.index}});
  }
  return {{"trials_run", trials_run},
          {"qualifying", qualifying},
          {"indices_checked", indices_checked},
          {"pass_i", pass_i},
          {"pass_ii", pass_ii},
          {"pass_iii", pass_iii},
          {"pass_iv", pass_iv},
          {"all_passed", all_passed()},
          {"counterexamples", ce}};
}

ResamplingReport resampling_report(const RunResult& result) {
  const Table& t = result.trials;
  if (result.config.kind != ExperimentKind::resampling) throw std::invalid_argument("resampling_report: wrong kind");
  ResamplingReport rep;
  const auto col = [&](const char* name) { return t.column(name); };
  for (const auto& r : t.rows) {
    ++rep.trials_run;
    if (!std::get<bool>(r[col("qualifying")])) continue;
    ++rep.qualifying;
    const auto n = static_cast<std::uint64_t>(std::get<std::int64_t>(r[col("indices")]));
    rep.indices_checked += n;
    const auto get = [&](const char* name) { return std::get<std::int64_t>(r[col(name)]); };
    rep.pass_i += static_cast<std::uint64_t>(get("pass_i"));
    rep.pass_ii += static_cast<std::uint64_t>(get("pass_ii"));
    rep.pass_iii += static_cast<std::uint64_t>(get("pass_iii"));
    rep.pass_iv += static_cast<std::uint64_t>(get("pass_iv"));
    for (const auto& [which, first] : {std::pair{"i", "first_fail_i"}, std::pair{"ii", "first_fail_ii"},
                                       std::pair{"iii", "first_fail_iii"}, std::pair{"iv", "first_fail_iv"}}) {
      if (get(first) != 0) {
        Counterexample c;
        c.trial = std::get<std::uint64_t>(r[col("trial")]);
        c.seed = std::get<std::uint64_t>(r[col("seed")]);
        c.edge_a = std::get<std::string>(r[col("eta_a")]);
        c.edge_b = std::get<std::string>(r[col("eta_b")]);
        c.assertion = which;
        c.index = get(first);
        rep.counterexamples.push_back(c);
      }
    }
  }
  return rep;
}

ResamplingReport resampling_experiment(const ExperimentConfig& config) {
  if (config.kind != ExperimentKind::resampling) throw ConfigError("resampling_experiment needs a resampling config");
  return resampling_report(run_trials(config));
}

std::vector<DecayPoint> failure_series(const Table& trials) {
  const auto ks = trials.numbers("k");
  const auto failed = trials.numbers("failed");
  std::vector<double> order;
  std::map<double, std::pair<std::uint64_t, std::uint64_t>> agg;
  for (std::size_t r = 0; r < ks.size(); ++r) {
    if (!agg.count(ks[r])) order.push_back(ks[r]);
    auto& a = agg[ks[r]];
    ++a.first;
    a.second += failed[r] > 0;
  }
  std::vector<DecayPoint> out;
  for (double k : order) {
    const auto [n, f] = agg[k];
    out.push_back({k, static_cast<double>(f) / static_cast<double>(n), n});
  }
  return out;
}

json decay_summary(const std::vector<DecayPoint>& series, Abscissa abscissa) {
  if (series.size() < 3) return nullptr;
  try {
    const auto fit = estimate_decay(series, abscissa);
    return {{"abscissa", to_string(abscissa)},
            {"rate", fit.rate},
            {"intercept", fit.intercept},
            {"rate_ci95", json::array({fit.rate_ci.lower, fit.rate_ci.upper})},
            {"sign_test_passed", fit.sign_test_passed},
            {"weighted", fit.weighted},
            {"replaced_zero", fit.replaced}};
  } catch (const std::invalid_argument& e) {
    return {{"error", e.what()}};
  }
}

}  // namespace fpp::harness
