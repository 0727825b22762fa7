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

#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fpp/certify.hpp"
#include "fpp/error.hpp"
#include "fpp/field_io.hpp"
#include "fpp/fpt.hpp"
#include "fpp/geodesics.hpp"
#include "fpp/harness/experiments.hpp"
#include "fpp/harness/selftest.hpp"
#include "fpp/harness/table.hpp"
#include "fpp/nbox.hpp"
#include "fpp/rng.hpp"

namespace fpplab {

using fpp::harness::Cell;
using fpp::harness::ExperimentConfig;
using fpp::harness::ExperimentKind;
using fpp::harness::Table;
using nlohmann::json;

namespace {

/// Writes under --out, or sends the primary output to stdout without it.
class Sink {
 public:
  explicit Sink(std::string dir) : dir_(std::move(dir)) {}
  void emit(const std::string& name, const std::string& text, bool primary) const {
    if (!dir_.empty()) {
      fpp::harness::write_text_file(dir_ + "/" + name, text);
    } else if (primary) {
      std::cout << text;
    }
  }

 private:
  std::string dir_;
};

fpp::WeightField load_field(const CommonFlags& common, const ExperimentConfig& cfg) {
  if (!common.field.empty()) {
    std::ifstream in(common.field);
    if (!in) throw fpp::ConfigError("cannot open field dump '" + common.field + "'");
    return fpp::read_field(in);
  }
  return fpp::harness::trial_field(cfg, common.trial, cfg.radius);
}

fpp::Coord coord_or_origin(const std::string& text, int dim) {
  if (text.empty()) return fpp::Coord(dim);
  auto c = fpp::Coord::parse(text);
  if (c.dimension() != dim) {
    throw fpp::ConfigError("coordinate '" + text + "' has dimension " + std::to_string(c.dimension()) +
                           ", field has " + std::to_string(dim));
  }
  return c;
}

std::string plain_path(const fpp::Box& box, std::span<const fpp::VertexId> path) {
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += ' ';
    s += box.coord(path[i]).to_plain();
  }
  return s;
}

std::string index_list(const std::vector<std::int64_t>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(xs[i]);
  }
  return s;
}

fpp::BlackParams black_params(const ExperimentConfig& cfg, fpp::BlackMode mode) {
  fpp::BlackParams bp;
  bp.mode = mode;
  bp.delta = cfg.params.delta;
  bp.m = cfg.params.m;
  bp.alpha2 = cfg.params.alpha2;
  bp.size_reading = cfg.params.size_reading;
  return bp;
}

std::int64_t integer_window(double m) {
  if (m < 1 || std::floor(m) != m) throw fpp::ConfigError("--m must be a positive integer window here");
  return static_cast<std::int64_t>(m);
}

json clause_json(const fpp::Clause& c) { return {{"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}}; }

}  // namespace

ExperimentConfig build_config(const CommonFlags& common, const ParamFlags& params, ExperimentKind default_kind) {
  json doc;
  if (!common.config.empty()) {
    doc = ExperimentConfig::load(common.config).to_json();
  } else {
    ExperimentConfig base;
    base.kind = default_kind;
    doc = base.to_json();
  }
  if (common.dim) doc["dimension"] = *common.dim;
  if (common.radius) doc["radius"] = *common.radius;
  if (common.dist) doc["distribution"] = *common.dist;
  if (common.mode) doc["mode"] = *common.mode;
  if (common.grid) doc["grid_exponent"] = *common.grid;
  if (common.seed) doc["seed"] = *common.seed;
  if (common.trials) doc["trials"] = *common.trials;
  if (common.workers) doc["workers"] = *common.workers;
  if (!common.out.empty()) doc["output"]["dir"] = common.out;
  auto& p = doc["params"];
  if (params.delta) p["delta"] = *params.delta;
  if (params.m) p["m"] = *params.m;
  if (params.alpha2) p["alpha2"] = *params.alpha2;
  if (params.size_reading) p["size_reading"] = *params.size_reading;
  if (params.event) p["event"] = *params.event;
  if (params.short_bound) p["short_bound"] = *params.short_bound;
  if (params.pair_budget) p["pair_budget"] = *params.pair_budget;
  if (params.n) p["n"] = *params.n;
  if (params.delta_speed) p["delta_speed"] = *params.delta_speed;
  if (params.r) p["r"] = *params.r;
  if (params.horizon) p["horizon"] = *params.horizon;
  if (params.threshold) p["threshold"] = *params.threshold;
  if (params.distance) p["distance"] = *params.distance;
  if (params.target_qualifying) p["target_qualifying"] = *params.target_qualifying;
  if (params.abscissa) p["abscissa"] = *params.abscissa;
  if (!params.k_list.empty()) p["k_list"] = params.k_list;
  return ExperimentConfig::from_json(doc);
}

int cmd_sample(const CommonFlags& common) {
  const auto cfg = build_config(common, {}, ExperimentKind::passage_time_mean);
  const auto field = load_field(common, cfg);
  std::ostringstream ss;
  fpp::write_field(ss, field);
  Sink(cfg.output.dir).emit("field.txt", ss.str(), true);
  return 0;
}

int cmd_fpt(const CommonFlags& common, const std::string& source) {
  const auto cfg = build_config(common, {}, ExperimentKind::passage_time_mean);
  const auto field = load_field(common, cfg);
  const auto& box = field.box();
  const auto times = fpp::shortest_paths(field, coord_or_origin(source, box.dimension()));
  const bool exact = field.mode() == fpp::WeightMode::exact;
  Table t;
  t.columns = {"vertex", "reached", "time", "numerator"};
  for (std::size_t i = 0; i < box.vertex_count(); ++i) {
    const auto v = static_cast<fpp::VertexId>(i);
    const bool reached = times.reached(v);
    t.add({box.coord(v).to_plain(), reached, reached ? Cell{times.time(v)} : Cell{std::string()},
           reached && exact ? Cell{times.exact_time(v)} : Cell{std::string()}});
  }
  Sink(cfg.output.dir).emit("fpt.csv", fpp::harness::to_csv(t), true);
  return 0;
}

int cmd_rays(const CommonFlags& common, const ParamFlags& params, const std::string& source) {
  const auto cfg = build_config(common, params, ExperimentKind::passage_time_mean);
  const auto field = load_field(common, cfg);
  const auto& box = field.box();
  const auto dag = fpp::geodesic_dag(field, coord_or_origin(source, box.dimension()));
  const auto rays = fpp::boundary_rays(dag);
  const std::int64_t horizon = cfg.params.horizon > 0 ? cfg.params.horizon : box.radius() / 2;

  Table rt;
  rt.columns = {"ray", "terminal", "length", "vertices"};
  for (std::size_t i = 0; i < rays.size(); ++i) {
    rt.add({static_cast<std::int64_t>(i), box.coord(rays[i].terminal()).to_plain(), rays[i].length(),
            plain_path(box, rays[i].vertices)});
  }
  Table ct;
  ct.columns = {"ray_a", "ray_b", "verdict", "shared_beyond_horizon", "shared_terminal"};
  for (std::size_t i = 0; i < rays.size(); ++i) {
    for (std::size_t j = i + 1; j < rays.size(); ++j) {
      const auto v = fpp::classify_coalescence(box, rays[i], rays[j], horizon);
      ct.add({static_cast<std::int64_t>(i), static_cast<std::int64_t>(j), fpp::to_string(v.verdict),
              v.shared_beyond_horizon, v.shared_terminal});
    }
  }
  const Sink sink(cfg.output.dir);
  sink.emit("rays.csv", fpp::harness::to_csv(rt), true);
  sink.emit("coalescence.csv", fpp::harness::to_csv(ct), false);
  return 0;
}

int cmd_badpoints(const CommonFlags& common, const std::string& source, const std::string& probe,
                  const std::string& badness) {
  const auto cfg = build_config(common, {}, ExperimentKind::passage_time_mean);
  const auto field = load_field(common, cfg);
  const auto& box = field.box();
  fpp::BadnessMode mode = fpp::BadnessMode::general;
  if (badness == "unique") {
    mode = fpp::BadnessMode::unique;
  } else if (badness != "general") {
    throw fpp::ConfigError("--badness must be general or unique");
  }
  fpp::Coord probe_coord = coord_or_origin(probe, box.dimension());
  if (probe.empty()) probe_coord[0] = 1;
  const auto ray_dag = fpp::geodesic_dag(field, coord_or_origin(source, box.dimension()));
  const auto probe_dag = fpp::geodesic_dag(field, probe_coord);
  std::vector<fpp::BadPointReport> reports;
  Table t;
  t.columns = {"ray", "terminal", "length", "degenerate", "bad_count", "bad_indices", "s"};
  for (const auto& ray : fpp::boundary_rays(ray_dag)) {
    reports.push_back(fpp::bad_indices(ray, probe_dag, field, mode));
    const auto& r = reports.back();
    t.add({static_cast<std::int64_t>(reports.size() - 1), box.coord(ray.terminal()).to_plain(), ray.length(),
           r.degenerate, static_cast<std::int64_t>(r.bad_indices.size()), index_list(r.bad_indices),
           r.s.to_string()});
  }
  const auto rk = fpp::rk_statistics(reports, probe_dag.times());
  json summary = {{"rays", reports.size()},
                  {"probe", probe_coord.to_plain()},
                  {"r", rk.r.to_string()},
                  {"k", rk.k ? json(*rk.k) : json(nullptr)},
                  {"ray", rk.ray}};
  const Sink sink(cfg.output.dir);
  sink.emit("badpoints.csv", fpp::harness::to_csv(t), true);
  sink.emit("badpoints.json", fpp::harness::dump_json(summary), false);
  return 0;
}

int cmd_certify(const CommonFlags& common, const ParamFlags& params, const std::string& a, const std::string& b,
                std::optional<std::int64_t> scan_k, const std::string& black_mode, bool assume_interior) {
  const auto cfg = build_config(common, params, ExperimentKind::black_scan);
  const auto field = load_field(common, cfg);
  const int dim = field.box().dimension();
  const Sink sink(cfg.output.dir);
  if (scan_k) {
    fpp::ScanOptions so;
    so.event = cfg.params.event;
    so.short_bound = cfg.params.short_bound;
    so.pair_budget = cfg.params.pair_budget;
    so.subsample_seed = fpp::derive_bits(cfg.seed, {0x7363616eULL, static_cast<std::uint64_t>(*scan_k)});
    const auto rep = fpp::scan_event(field, *scan_k, black_params(cfg, fpp::event_mode(so.event)), so);
    sink.emit("scan.csv", fpp::scan_csv_header() + "\n" + fpp::scan_csv_row(rep) + "\n", true);
    json viol = json::array();
    for (const auto& v : rep.violations) viol.push_back({{"a", v.a.to_plain()}, {"b", v.b.to_plain()}, {"clause", v.clause}});
    sink.emit("scan.json",
              fpp::harness::dump_json({{"k", rep.k},
                                       {"event", fpp::to_string(rep.event)},
                                       {"pairs_total", rep.pairs_total},
                                       {"pairs_checked", rep.pairs_checked},
                                       {"pairs_failed", rep.pairs_failed},
                                       {"subsampled", rep.subsampled},
                                       {"passed", rep.passed},
                                       {"violations", viol}}),
              false);
    return 0;
  }
  if (a.empty() || b.empty()) throw fpp::ConfigError("certify needs --a and --b, or --scan");
  const auto ca = coord_or_origin(a, dim);
  const auto cb = coord_or_origin(b, dim);
  json doc = {{"a", ca.to_plain()}, {"b", cb.to_plain()}, {"mode", black_mode}};
  try {
    const auto rep = fpp::certify_pair(field, ca, cb, black_params(cfg, fpp::parse_black_mode(black_mode)),
                                       assume_interior ? fpp::Interiority::assume : fpp::Interiority::enforce);
    doc["size_reading"] = fpp::to_string(rep.size_reading);
    doc["size"] = rep.size;
    doc["clauses"] = json::array({clause_json(rep.clauses[0]), clause_json(rep.clauses[1]), clause_json(rep.clauses[2])});
    doc["holds"] = rep.holds;
    doc["first_failing"] = rep.first_failing;
  } catch (const fpp::NonUniqueGeodesic& e) {
    doc["holds"] = false;
    doc["non_unique"] = true;
  }
  sink.emit("certify.json", fpp::harness::dump_json(doc), true);
  return 0;
}

int cmd_nbox(const CommonFlags& common, const ParamFlags& params, const std::string& source,
             const std::string& target) {
  const auto cfg = build_config(common, params, ExperimentKind::gray_count);
  const auto field = load_field(common, cfg);
  const auto& box = field.box();
  const int dim = box.dimension();
  const auto src = coord_or_origin(source, dim);
  fpp::Coord tgt = coord_or_origin(target, dim);
  if (target.empty()) tgt[0] = static_cast<int>(std::min<std::int64_t>(cfg.params.distance, box.radius()));
  fpp::NBoxTuning tuning;
  tuning.delta_speed = cfg.params.delta_speed;
  tuning.r = cfg.params.r;
  tuning.m = integer_window(cfg.params.m);
  tuning.alpha2 = cfg.params.alpha2;
  tuning.law = field.distribution() ? *field.distribution() : cfg.distribution;
  const int n = cfg.params.n;

  const auto dag = fpp::geodesic_dag(field, src);
  const auto t = box.vertex_id(tgt);
  const fpp::DagStatistics stats(dag, field);
  const bool unique = stats.at(t).count.value == 1 && !stats.at(t).count.saturated;
  const auto path = fpp::canonical_path(dag, t);
  Table tab;
  tab.columns = {"box", "speed_ok", "cap_ok", "cap_dropped", "black", "white", "gray", "good"};
  std::int64_t skipped = 0;
  std::int64_t black = 0;
  std::int64_t white = 0;
  std::int64_t gray = 0;
  for (const auto& nb : fpp::nboxes_meeting(box, path, n)) {
    if (!box.contains(nb.b())) {
      ++skipped;
      continue;
    }
    const auto c = fpp::nbox_classify(field, dag, t, nb, tuning);
    black += c.black;
    white += c.white;
    gray += c.gray;
    tab.add({nb.to_string(), c.speed_ok, c.cap_ok, c.cap_dropped, c.black, c.white, c.gray, c.good});
  }
  json summary = {{"source", src.to_plain()},
                  {"target", tgt.to_plain()},
                  {"n", n},
                  {"unique_geodesic", unique},
                  {"boxes_classified", tab.rows.size()},
                  {"boxes_skipped", skipped},
                  {"black", black},
                  {"white", white},
                  {"gray", gray}};
  const Sink sink(cfg.output.dir);
  sink.emit("nbox.csv", fpp::harness::to_csv(tab), true);
  sink.emit("nbox.json", fpp::harness::dump_json(summary), false);
  return 0;
}

int cmd_resample(const CommonFlags& common, const ParamFlags& params) {
  auto cfg = build_config(common, params, ExperimentKind::resampling);
  if (cfg.kind != ExperimentKind::resampling) throw fpp::ConfigError("resample-exp needs a resampling config");
  const auto result = fpp::harness::run_trials(cfg);
  if (cfg.output.dir.empty()) {
    std::cout << fpp::harness::dump_json(result.summary);
  } else {
    fpp::harness::write_outputs(result);
  }
  return fpp::harness::resampling_report(result).all_passed() ? 0 : 1;
}

int cmd_decay(const CommonFlags& common, const ParamFlags& params, const std::string& series) {
  const auto cfg = build_config(common, params, ExperimentKind::black_scan);
  std::vector<fpp::harness::DecayPoint> points;
  if (!series.empty()) {
    std::ifstream in(series);
    if (!in) throw fpp::ConfigError("cannot open series '" + series + "'");
    std::string line;
    std::getline(in, line);
    if (line.rfind("scale,probability", 0) != 0) {
      throw fpp::ConfigError("series header must be scale,probability[,trials]");
    }
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string field;
      std::vector<std::string> parts;
      while (std::getline(ss, field, ',')) parts.push_back(field);
      if (parts.size() < 2) throw fpp::ConfigError("malformed series line '" + line + "'");
      fpp::harness::DecayPoint p;
      p.scale = std::stod(parts[0]);
      p.probability = std::stod(parts[1]);
      if (parts.size() > 2) p.trials = std::stoull(parts[2]);
      points.push_back(p);
    }
  } else {
    if (common.config.empty()) throw fpp::ConfigError("decay needs --series or --config");
    auto run_cfg = cfg;
    run_cfg.output.dir.clear();
    const auto result = fpp::harness::run_trials(run_cfg);
    points = fpp::harness::failure_series(result.trials);
    if (!cfg.output.dir.empty()) {
      auto res = result;
      res.config.output.dir = cfg.output.dir;
      fpp::harness::write_outputs(res);
    }
  }
  json pts = json::array();
  std::vector<double> ps;
  for (const auto& p : points) {
    pts.push_back({{"scale", p.scale}, {"probability", p.probability}, {"trials", p.trials}});
    ps.push_back(p.probability);
  }
  json doc = {{"series", pts},
              {"decreasing", fpp::harness::is_decreasing(ps)},
              {"non_increasing", fpp::harness::is_non_increasing(ps)},
              {"decay", fpp::harness::decay_summary(points, cfg.params.abscissa)}};
  Sink(cfg.output.dir).emit("decay.json", fpp::harness::dump_json(doc), true);
  return 0;
}

int cmd_selftest(const CommonFlags& common, int fixtures, int max_radius) {
  const auto cfg = build_config(common, {}, ExperimentKind::passage_time_mean);
  fpp::harness::SelftestOptions opt;
  opt.fixtures = fixtures;
  opt.seed = cfg.seed;
  opt.max_radius = max_radius;
  opt.workers = fpp::harness::resolve_workers(cfg);
  const auto rep = fpp::harness::run_selftest(opt);
  const Sink sink(cfg.output.dir);
  sink.emit("selftest.json", fpp::harness::dump_json(rep.to_json()), true);
  sink.emit("selftest.csv", fpp::harness::to_csv(rep.table), false);
  if (!rep.passed()) {
    std::cerr << "selftest: " << rep.mismatches.size() << " mismatches\n";
    return 1;
  }
  return 0;
}

int cmd_run(const CommonFlags& common, const ParamFlags& params, bool validate_only) {
  if (validate_only) {
    std::ifstream in(common.config);
    if (!in) throw fpp::ConfigError("cannot open config '" + common.config + "'");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      std::cout << "invalid: " << e.what() << "\n";
      return 2;
    }
    const auto problems = fpp::harness::validate_config(doc);
    if (problems.empty()) {
      std::cout << "valid\n";
      return 0;
    }
    for (const auto& p : problems) std::cout << "invalid: " << p << "\n";
    return 2;
  }
  const auto cfg = build_config(common, params, ExperimentKind::passage_time_mean);
  const auto result = fpp::harness::run_trials(cfg);
  if (cfg.output.dir.empty()) {
    std::cout << fpp::harness::dump_json(result.summary);
  } else {
    fpp::harness::write_outputs(result);
  }
  return 0;
}

}  // namespace fpplab
