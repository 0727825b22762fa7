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

#include "fpp/field_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "fpp/error.hpp"

namespace fpp {

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line.substr(0, line.find('#')));
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

std::int64_t to_int(const std::string& s, int line) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw ConfigError("line " + std::to_string(line) + ": bad integer '" + s + "'");
  return v;
}

}  // namespace

WeightField Fixture::field() const {
  BoxPtr box = build_box(dimension, radius);
  std::vector<std::int64_t> w(box->edge_count(), default_numerator);
  for (const auto& [e, num] : edges) w[static_cast<std::size_t>(box->edge_id(e))] = num;
  return WeightField::from_numerators(box, std::move(w), grid_exponent);
}

std::vector<std::vector<std::string>> Fixture::expect(const std::string& tag) const {
  std::vector<std::vector<std::string>> out;
  for (const auto& e : expectations) {
    if (!e.empty() && e[0] == tag) out.push_back(e);
  }
  return out;
}

Fixture parse_fixture(std::istream& in, const std::string& name) {
  Fixture f;
  f.name = name;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = tokens_of(line);
    if (tok.empty()) continue;
    auto need = [&](std::size_t n) {
      if (tok.size() != n) {
        throw ConfigError(name + " line " + std::to_string(lineno) + ": '" + tok[0] + "' takes " +
                          std::to_string(n - 1) + " argument(s)");
      }
    };
    if (tok[0] == "dimension") {
      need(2);
      f.dimension = static_cast<int>(to_int(tok[1], lineno));
    } else if (tok[0] == "radius") {
      need(2);
      f.radius = static_cast<int>(to_int(tok[1], lineno));
    } else if (tok[0] == "grid_exponent") {
      need(2);
      f.grid_exponent = static_cast<int>(to_int(tok[1], lineno));
    } else if (tok[0] == "default") {
      need(2);
      f.default_numerator = to_int(tok[1], lineno);
    } else if (tok[0] == "edge") {
      need(4);
      try {
        f.edges.emplace_back(Edge(Coord::parse(tok[1]), Coord::parse(tok[2])), to_int(tok[3], lineno));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(name + " line " + std::to_string(lineno) + ": " + e.what());
      }
    } else if (tok[0] == "expect") {
      f.expectations.emplace_back(tok.begin() + 1, tok.end());
    } else {
      throw ConfigError(name + " line " + std::to_string(lineno) + ": unknown directive '" + tok[0] + "'");
    }
  }
  return f;
}

Fixture load_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open fixture '" + path + "'");
  const auto slash = path.find_last_of('/');
  return parse_fixture(in, slash == std::string::npos ? path : path.substr(slash + 1));
}

void write_fixture(std::ostream& out, const Fixture& f) {
  out << "dimension " << f.dimension << "\nradius " << f.radius << "\ngrid_exponent " << f.grid_exponent
      << "\ndefault " << f.default_numerator << "\n";
  for (const auto& [e, n] : f.edges) out << "edge " << e.a().to_plain() << " " << e.b().to_plain() << " " << n << "\n";
  for (const auto& ex : f.expectations) {
    out << "expect";
    for (const auto& t : ex) out << " " << t;
    out << "\n";
  }
}

void write_field(std::ostream& out, const WeightField& field) {
  const Box& box = field.box();
  out << "# fpplab-field dimension " << box.dimension() << " radius " << box.radius() << " mode "
      << to_string(field.mode()) << "\n";
  for (std::size_t e = 0; e < field.edge_count(); ++e) {
    const auto [u, v] = box.endpoints(static_cast<EdgeId>(e));
    out << box.coord(u).to_plain() << " " << box.coord(v).to_plain() << " ";
    if (field.mode() == WeightMode::exact) {
      out << field.numerators()[e] << " " << field.grid_exponent() << "\n";
      continue;
    }
    const double w = field.values()[e];
    int exp = 0;
    const double mant = std::frexp(w, &exp);
    if (w == 0) {
      out << "0 0\n";
    } else {
      out << static_cast<std::int64_t>(std::ldexp(mant, 53)) << " " << 53 - exp << "\n";
    }
  }
}

WeightField read_field(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ConfigError("field dump: empty input");
  std::istringstream hs(header);
  std::string hash, tag, kd, kr, km, mode;
  int d = 0, r = 0;
  hs >> hash >> tag >> kd >> d >> kr >> r >> km >> mode;
  if (hash != "#" || tag != "fpplab-field" || kd != "dimension" || kr != "radius" || km != "mode") {
    throw ConfigError("field dump: missing '# fpplab-field dimension <d> radius <r> mode <m>' header");
  }
  const WeightMode wm = parse_weight_mode(mode);
  BoxPtr box = build_box(d, r);
  std::vector<std::int64_t> nums(box->edge_count(), 0);
  std::vector<double> vals(box->edge_count(), 0);
  std::vector<char> seen(box->edge_count(), 0);
  std::optional<int> grid;
  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = tokens_of(line);
    if (tok.empty()) continue;
    if (tok.size() != 4) throw ConfigError("field dump line " + std::to_string(lineno) + ": expected 4 fields");
    EdgeId e = kNoEdge;
    try {
      e = box->edge_id(Edge(Coord::parse(tok[0]), Coord::parse(tok[1])));
    } catch (const std::exception& ex) {
      throw ConfigError("field dump line " + std::to_string(lineno) + ": " + ex.what());
    }
    const std::int64_t num = to_int(tok[2], lineno);
    const auto g = static_cast<int>(to_int(tok[3], lineno));
    const auto i = static_cast<std::size_t>(e);
    if (seen[i]) throw ConfigError("field dump line " + std::to_string(lineno) + ": duplicate edge");
    seen[i] = 1;
    if (wm == WeightMode::exact) {
      if (grid && *grid != g) throw ConfigError("field dump: exact dumps need one grid exponent");
      grid = g;
      nums[i] = num;
    } else {
      vals[i] = std::ldexp(static_cast<double>(num), -g);
    }
  }
  for (char s : seen) {
    if (!s) throw ConfigError("field dump: some edges of the box are missing");
  }
  if (wm == WeightMode::exact) return WeightField::from_numerators(box, std::move(nums), grid.value_or(0));
  return WeightField::from_values(box, std::move(vals));
}

}  // namespace fpp
