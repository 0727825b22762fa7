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

#include "fpp/harness/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "fpp/error.hpp"

namespace fpp::harness {

namespace {

const std::vector<std::pair<ExperimentKind, const char*>> kKindNames = {
    {ExperimentKind::passage_time_mean, "passage-time-mean"},
    {ExperimentKind::uniqueness, "uniqueness"},
    {ExperimentKind::metric, "metric"},
    {ExperimentKind::heavy_density, "heavy-density"},
    {ExperimentKind::length_bound, "length-bound"},
    {ExperimentKind::speed_bound, "speed-bound"},
    {ExperimentKind::black_scan, "black-scan"},
    {ExperimentKind::gray_count, "gray-count"},
    {ExperimentKind::resampling, "resampling"},
};

using nlohmann::json;

enum class Type { integer, number, string, array_of_integers, object };

struct Rule {
  Type type;
  double minimum = -std::numeric_limits<double>::infinity();
  bool exclusive_minimum = false;
  double maximum = std::numeric_limits<double>::infinity();
  std::vector<std::string> choices;
};

const std::map<std::string, Rule>& top_rules() {
  static const std::map<std::string, Rule> rules = {
      {"experiment", {Type::string, -INFINITY, false, INFINITY,
                      {"passage-time-mean", "uniqueness", "metric", "heavy-density", "length-bound", "speed-bound",
                       "black-scan", "gray-count", "resampling"}}},
      {"dimension", {Type::integer, 2, false, 8, {}}},
      {"radius", {Type::integer, 0, false, 4096, {}}},
      {"distribution", {Type::string, -INFINITY, false, INFINITY, {}}},
      {"mode", {Type::string, -INFINITY, false, INFINITY, {"exact", "float"}}},
      {"grid_exponent", {Type::integer, 0, false, 60, {}}},
      {"trials", {Type::integer, 0, false, INFINITY, {}}},
      {"seed", {Type::integer, 0, false, INFINITY, {}}},
      {"workers", {Type::integer, 1, false, 1024, {}}},
      {"params", {Type::object, -INFINITY, false, INFINITY, {}}},
      {"output", {Type::object, -INFINITY, false, INFINITY, {}}},
  };
  return rules;
}

const std::map<std::string, Rule>& param_rules() {
  static const std::map<std::string, Rule> rules = {
      {"delta", {Type::number, 0, true, INFINITY, {}}},
      {"m", {Type::number, 0, true, INFINITY, {}}},
      {"alpha2", {Type::number, 0, false, INFINITY, {}}},
      {"k_list", {Type::array_of_integers, 1, false, INFINITY, {}}},
      {"n", {Type::integer, 1, false, INFINITY, {}}},
      {"horizon", {Type::integer, 0, false, INFINITY, {}}},
      {"threshold", {Type::number, -INFINITY, false, INFINITY, {}}},
      {"pair_budget", {Type::integer, 1, false, INFINITY, {}}},
      {"event", {Type::string, -INFINITY, false, INFINITY, {"C", "C2", "C3"}}},
      {"short_bound", {Type::string, -INFINITY, false, INFINITY, {"half-k", "delta-k"}}},
      {"size_reading", {Type::string, -INFINITY, false, INFINITY, {"path-length", "path-count"}}},
      {"delta_speed", {Type::number, 0, true, INFINITY, {}}},
      {"r", {Type::number, 0, true, INFINITY, {}}},
      {"distance", {Type::integer, 1, false, INFINITY, {}}},
      {"target_qualifying", {Type::integer, 1, false, INFINITY, {}}},
      {"abscissa", {Type::string, -INFINITY, false, INFINITY, {"sqrt-k", "k", "l1"}}},
  };
  return rules;
}

const std::map<std::string, Rule>& output_rules() {
  static const std::map<std::string, Rule> rules = {
      {"dir", {Type::string, -INFINITY, false, INFINITY, {}}},
      {"trials_csv", {Type::string, 1, false, INFINITY, {}}},
      {"summary_json", {Type::string, 1, false, INFINITY, {}}},
  };
  return rules;
}

bool is_integer(const json& v) {
  if (v.is_number_integer()) return true;
  if (!v.is_number_float()) return false;
  const double d = v.get<double>();
  return std::isfinite(d) && std::floor(d) == d;
}

double as_double(const json& v) { return v.get<double>(); }

void check_value(const std::string& where, const json& v, const Rule& rule, std::vector<std::string>& problems) {
  auto range = [&](double x) {
    const bool low = rule.exclusive_minimum ? x > rule.minimum : x >= rule.minimum;
    if (!low || x > rule.maximum) problems.push_back(where + ": value out of range");
  };
  switch (rule.type) {
    case Type::integer:
      if (!is_integer(v)) {
        problems.push_back(where + ": expected an integer");
      } else {
        range(as_double(v));
      }
      break;
    case Type::number:
      if (!v.is_number()) {
        problems.push_back(where + ": expected a number");
      } else {
        range(as_double(v));
      }
      break;
    case Type::string:
      if (!v.is_string()) {
        problems.push_back(where + ": expected a string");
        break;
      }
      if (!rule.choices.empty()) {
        bool found = false;
        for (const auto& c : rule.choices) found = found || v.get<std::string>() == c;
        if (!found) problems.push_back(where + ": '" + v.get<std::string>() + "' is not an allowed value");
      } else if (std::isfinite(rule.minimum) && v.get<std::string>().size() < static_cast<std::size_t>(rule.minimum)) {
        problems.push_back(where + ": string too short");
      }
      break;
    case Type::array_of_integers:
      if (!v.is_array() || v.empty()) {
        problems.push_back(where + ": expected a non-empty array of integers");
        break;
      }
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!is_integer(v[i])) {
          problems.push_back(where + "[" + std::to_string(i) + "]: expected an integer");
        } else if (as_double(v[i]) < rule.minimum) {
          problems.push_back(where + "[" + std::to_string(i) + "]: value out of range");
        }
      }
      break;
    case Type::object:
      if (!v.is_object()) problems.push_back(where + ": expected an object");
      break;
  }
}

void check_object(const std::string& prefix, const json& obj, const std::map<std::string, Rule>& rules,
                  std::vector<std::string>& problems) {
  for (const auto& [key, value] : obj.items()) {
    const auto it = rules.find(key);
    if (it == rules.end()) {
      problems.push_back(prefix + key + ": unknown key");
      continue;
    }
    check_value(prefix + key, value, it->second, problems);
  }
}

std::uint64_t get_u64(const json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  return static_cast<std::uint64_t>(v.get<double>());
}

std::int64_t get_i64(const json& v) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  return static_cast<std::int64_t>(v.get<double>());
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "passage-time-mean";
}

ExperimentKind parse_experiment_kind(const std::string& text) {
  for (const auto& [k, name] : kKindNames) {
    if (text == name) return k;
  }
  throw ConfigError("unknown experiment '" + text + "'");
}

std::string to_string(Abscissa a) {
  switch (a) {
    case Abscissa::sqrt_k: return "sqrt-k";
    case Abscissa::k: return "k";
    case Abscissa::l1: return "l1";
  }
  return "k";
}

Abscissa parse_abscissa(const std::string& text) {
  if (text == "sqrt-k") return Abscissa::sqrt_k;
  if (text == "k") return Abscissa::k;
  if (text == "l1") return Abscissa::l1;
  throw ConfigError("unknown abscissa '" + text + "' (expected sqrt-k|k|l1)");
}

std::vector<std::string> validate_config(const json& doc) {
  std::vector<std::string> problems;
  if (!doc.is_object()) return {"config: expected a JSON object"};
  check_object("", doc, top_rules(), problems);
  if (!doc.contains("experiment")) problems.push_back("experiment: required key missing");
  if (doc.contains("distribution") && doc["distribution"].is_string()) {
    try {
      Distribution::parse(doc["distribution"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      problems.push_back(std::string("distribution: ") + e.what());
    }
  }
  if (doc.contains("params") && doc["params"].is_object()) {
    check_object("params.", doc["params"], param_rules(), problems);
  }
  if (doc.contains("output") && doc["output"].is_object()) {
    check_object("output.", doc["output"], output_rules(), problems);
  }
  return problems;
}

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
  const auto problems = validate_config(doc);
  if (!problems.empty()) {
    std::string msg = "invalid experiment config:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
  ExperimentConfig c;
  c.kind = parse_experiment_kind(doc["experiment"].get<std::string>());
  if (doc.contains("dimension")) c.dimension = static_cast<int>(get_i64(doc["dimension"]));
  if (doc.contains("radius")) c.radius = static_cast<int>(get_i64(doc["radius"]));
  if (doc.contains("distribution")) {
    try {
      c.distribution = Distribution::parse(doc["distribution"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("distribution: ") + e.what());
    }
  }
  if (doc.contains("mode")) c.mode = parse_weight_mode(doc["mode"].get<std::string>());
  if (doc.contains("grid_exponent")) c.grid_exponent = static_cast<int>(get_i64(doc["grid_exponent"]));
  if (doc.contains("trials")) c.trials = get_u64(doc["trials"]);
  if (doc.contains("seed")) c.seed = get_u64(doc["seed"]);
  if (doc.contains("workers")) c.workers = static_cast<unsigned>(get_u64(doc["workers"]));
  if (doc.contains("params")) {
    const json& p = doc["params"];
    ExperimentParams& q = c.params;
    if (p.contains("delta")) q.delta = p["delta"].get<double>();
    if (p.contains("m")) q.m = p["m"].get<double>();
    if (p.contains("alpha2")) q.alpha2 = p["alpha2"].get<double>();
    if (p.contains("k_list")) {
      q.k_list.clear();
      for (const auto& k : p["k_list"]) q.k_list.push_back(get_i64(k));
    }
    if (p.contains("n")) q.n = static_cast<int>(get_i64(p["n"]));
    if (p.contains("horizon")) q.horizon = get_i64(p["horizon"]);
    if (p.contains("threshold")) q.threshold = p["threshold"].get<double>();
    if (p.contains("pair_budget")) q.pair_budget = get_u64(p["pair_budget"]);
    if (p.contains("event")) q.event = parse_event_kind(p["event"].get<std::string>());
    if (p.contains("short_bound")) q.short_bound = parse_short_bound(p["short_bound"].get<std::string>());
    if (p.contains("size_reading")) q.size_reading = parse_size_reading(p["size_reading"].get<std::string>());
    if (p.contains("delta_speed")) q.delta_speed = p["delta_speed"].get<double>();
    if (p.contains("r")) q.r = p["r"].get<double>();
    if (p.contains("distance")) q.distance = get_i64(p["distance"]);
    if (p.contains("target_qualifying")) q.target_qualifying = get_u64(p["target_qualifying"]);
    if (p.contains("abscissa")) q.abscissa = parse_abscissa(p["abscissa"].get<std::string>());
  }
  if (doc.contains("output")) {
    const json& o = doc["output"];
    if (o.contains("dir")) c.output.dir = o["dir"].get<std::string>();
    if (o.contains("trials_csv")) c.output.trials_csv = o["trials_csv"].get<std::string>();
    if (o.contains("summary_json")) c.output.summary_json = o["summary_json"].get<std::string>();
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return from_json(doc);
}

json ExperimentConfig::to_json() const {
  json p = {
      {"delta", params.delta},
      {"m", params.m},
      {"alpha2", params.alpha2},
      {"k_list", params.k_list},
      {"n", params.n},
      {"horizon", params.horizon},
      {"threshold", params.threshold},
      {"event", fpp::to_string(params.event)},
      {"short_bound", fpp::to_string(params.short_bound)},
      {"size_reading", fpp::to_string(params.size_reading)},
      {"delta_speed", params.delta_speed},
      {"r", params.r},
      {"distance", params.distance},
      {"abscissa", harness::to_string(params.abscissa)},
  };
  if (params.pair_budget) p["pair_budget"] = *params.pair_budget;
  if (params.target_qualifying) p["target_qualifying"] = *params.target_qualifying;
  json doc = {
      {"experiment", harness::to_string(kind)},
      {"dimension", dimension},
      {"radius", radius},
      {"distribution", distribution.describe()},
      {"mode", fpp::to_string(mode)},
      {"grid_exponent", grid_exponent},
      {"trials", trials},
      {"seed", seed},
      {"params", p},
      {"output", {{"dir", output.dir}, {"trials_csv", output.trials_csv}, {"summary_json", output.summary_json}}},
  };
  if (workers) doc["workers"] = *workers;
  return doc;
}

unsigned default_workers() {
  const char* env = std::getenv("FPP_WORKERS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1 || v > 1024) {
    throw ConfigError(std::string("FPP_WORKERS must be an integer in [1, 1024], got '") + env + "'");
  }
  return static_cast<unsigned>(v);
}

unsigned resolve_workers(const ExperimentConfig& config) {
  return config.workers ? *config.workers : default_workers();
}

}  // namespace fpp::harness
