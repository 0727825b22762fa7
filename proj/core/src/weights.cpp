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

#include "fpp/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fpp/error.hpp"
#include "fpp/rng.hpp"

namespace fpp {

std::uint64_t StreamRng::below(std::uint64_t n) noexcept {
  // Lemire's nearly-divisionless bounded integer.
  std::uint64_t x = (*this)();
  unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      x = (*this)();
      m = static_cast<unsigned __int128>(x) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::string to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::point_mass: return "point";
    case DistributionKind::two_point: return "two-point";
    case DistributionKind::finite_table: return "table";
    case DistributionKind::uniform: return "uniform";
    case DistributionKind::exponential: return "exponential";
    case DistributionKind::shifted_exponential: return "shifted-exponential";
  }
  return "unknown";
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("distribution: " + what);
}

void require_weight(double v) {
  require(std::isfinite(v) && v >= 0, "weights must be finite and non-negative");
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Distribution Distribution::point_mass(double value) {
  require_weight(value);
  Distribution d;
  d.kind_ = DistributionKind::point_mass;
  d.params_ = {value};
  d.atoms_ = {{value, 1.0}};
  d.finish_atoms();
  return d;
}

Distribution Distribution::two_point(double low, double high, double p_low) {
  require_weight(low);
  require_weight(high);
  require(low < high, "two-point requires low < high");
  require(p_low >= 0 && p_low <= 1, "two-point probability must lie in [0,1]");
  Distribution d;
  d.kind_ = DistributionKind::two_point;
  d.params_ = {low, high, p_low};
  d.atoms_ = {{low, p_low}, {high, 1.0 - p_low}};
  d.finish_atoms();
  return d;
}

Distribution Distribution::finite_table(std::vector<std::pair<double, double>> atoms) {
  require(!atoms.empty(), "table needs at least one atom");
  double total = 0;
  for (const auto& [v, p] : atoms) {
    require_weight(v);
    require(p >= 0 && p <= 1, "table probabilities must lie in [0,1]");
    total += p;
  }
  require(std::abs(total - 1.0) < 1e-9, "table probabilities must sum to 1");
  Distribution d;
  d.kind_ = DistributionKind::finite_table;
  for (const auto& [v, p] : atoms) {
    d.params_.push_back(v);
    d.params_.push_back(p);
  }
  d.atoms_ = std::move(atoms);
  d.finish_atoms();
  return d;
}

Distribution Distribution::uniform(double lo, double hi) {
  require_weight(lo);
  require_weight(hi);
  require(lo < hi, "uniform requires lo < hi");
  Distribution d;
  d.kind_ = DistributionKind::uniform;
  d.params_ = {lo, hi};
  d.f_minus_ = lo;
  d.f_plus_ = hi;
  return d;
}

Distribution Distribution::exponential(double mean) {
  require(std::isfinite(mean) && mean > 0, "exponential mean must be positive");
  Distribution d;
  d.kind_ = DistributionKind::exponential;
  d.params_ = {mean};
  d.f_minus_ = 0;
  d.f_plus_ = std::numeric_limits<double>::infinity();
  return d;
}

Distribution Distribution::shifted_exponential(double shift, double mean) {
  require_weight(shift);
  require(std::isfinite(mean) && mean > 0, "exponential mean must be positive");
  Distribution d;
  d.kind_ = DistributionKind::shifted_exponential;
  d.params_ = {shift, mean};
  d.f_minus_ = shift;
  d.f_plus_ = std::numeric_limits<double>::infinity();
  return d;
}

void Distribution::finish_atoms() {
  std::sort(atoms_.begin(), atoms_.end());
  // Merge equal values, drop null atoms.
  std::vector<std::pair<double, double>> merged;
  for (const auto& a : atoms_) {
    if (a.second <= 0) continue;
    if (!merged.empty() && merged.back().first == a.first) {
      merged.back().second += a.second;
    } else {
      merged.push_back(a);
    }
  }
  atoms_ = std::move(merged);
  f_minus_ = atoms_.front().first;
  f_plus_ = atoms_.back().first;
  atom_minus_ = atoms_.front().second;
  atom_plus_ = atoms_.back().second;
}

bool Distribution::is_continuous() const noexcept {
  return kind_ == DistributionKind::uniform || kind_ == DistributionKind::exponential ||
         kind_ == DistributionKind::shifted_exponential;
}

double Distribution::quantile(double u) const {
  switch (kind_) {
    case DistributionKind::uniform:
      return params_[0] + (params_[1] - params_[0]) * u;
    case DistributionKind::exponential:
      return -params_[0] * std::log1p(-u);
    case DistributionKind::shifted_exponential:
      return params_[0] - params_[1] * std::log1p(-u);
    default: {
      double acc = 0;
      for (const auto& [v, p] : atoms_) {
        acc += p;
        if (u < acc) return v;
      }
      return atoms_.back().first;
    }
  }
}

double Distribution::cdf(double x) const {
  switch (kind_) {
    case DistributionKind::uniform:
      if (x <= params_[0]) return 0;
      if (x >= params_[1]) return 1;
      return (x - params_[0]) / (params_[1] - params_[0]);
    case DistributionKind::exponential:
      return x <= 0 ? 0 : -std::expm1(-x / params_[0]);
    case DistributionKind::shifted_exponential:
      return x <= params_[0] ? 0 : -std::expm1(-(x - params_[0]) / params_[1]);
    default: {
      double acc = 0;
      for (const auto& [v, p] : atoms_) {
        if (v <= x) acc += p;
      }
      return std::min(acc, 1.0);
    }
  }
}

double Distribution::mean() const {
  switch (kind_) {
    case DistributionKind::uniform: return 0.5 * (params_[0] + params_[1]);
    case DistributionKind::exponential: return params_[0];
    case DistributionKind::shifted_exponential: return params_[0] + params_[1];
    default: {
      double m = 0;
      for (const auto& [v, p] : atoms_) m += v * p;
      return m;
    }
  }
}

std::string Distribution::describe() const {
  std::string s = to_string(kind_);
  if (kind_ == DistributionKind::finite_table) {
    s += ':';
    for (std::size_t i = 0; i + 1 < params_.size(); i += 2) {
      if (i) s += ',';
      s += fmt_double(params_[i]) + "@" + fmt_double(params_[i + 1]);
    }
    return s;
  }
  for (double p : params_) s += ":" + fmt_double(p);
  return s;
}

Distribution Distribution::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  require(!parts.empty(), "empty distribution string");
  const std::string& kind = parts[0];
  auto num = [&](std::size_t i) {
    require(i < parts.size(), "missing parameter in '" + text + "'");
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(parts[i], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == parts[i].size() && used > 0, "bad number '" + parts[i] + "'");
    return v;
  };
  auto arity = [&](std::size_t n) {
    require(parts.size() == n + 1, "'" + kind + "' takes " + std::to_string(n) + " parameter(s)");
  };
  if (kind == "point") {
    arity(1);
    return point_mass(num(1));
  }
  if (kind == "two-point" || kind == "bernoulli") {
    arity(3);
    return two_point(num(1), num(2), num(3));
  }
  if (kind == "uniform") {
    arity(2);
    return uniform(num(1), num(2));
  }
  if (kind == "exponential") {
    arity(1);
    return exponential(num(1));
  }
  if (kind == "shifted-exponential") {
    arity(2);
    return shifted_exponential(num(1), num(2));
  }
  if (kind == "table") {
    arity(1);
    std::vector<std::pair<double, double>> atoms;
    std::stringstream as(parts[1]);
    std::string atom;
    while (std::getline(as, atom, ',')) {
      const auto at = atom.find('@');
      require(at != std::string::npos, "table atoms are value@probability");
      atoms.emplace_back(std::stod(atom.substr(0, at)), std::stod(atom.substr(at + 1)));
    }
    return finite_table(std::move(atoms));
  }
  throw std::invalid_argument("distribution: unknown kind '" + kind + "'");
}

PercolationThresholds PercolationThresholds::defaults(int dimension) {
  switch (dimension) {
    case 2:
      return {0.5, 0.644701, "p_c(2)=1/2 exact (Kesten); oriented value is a numerical estimate"};
    case 3:
      return {0.2488126, 0.382224, "numerical estimates from the percolation literature"};
    case 4:
      return {0.1601314, 0.268644, "numerical estimates from the percolation literature"};
    default:
      throw std::invalid_argument("no shipped percolation thresholds for dimension " +
                                  std::to_string(dimension) + "; configure p_c and vec_p_c");
  }
}

void PercolationThresholds::validate() const {
  if (!(p_c > 0 && p_c <= vec_p_c && vec_p_c < 1)) {
    throw std::invalid_argument("percolation thresholds must satisfy 0 < p_c <= vec_p_c < 1");
  }
}

Usefulness usefulness_check(const Distribution& dist, const PercolationThresholds& t) {
  t.validate();
  const double atom = dist.atom_at_f_minus();
  std::ostringstream why;
  why.precision(6);
  if (dist.f_minus() == 0) {
    const bool ok = atom < t.p_c;
    why << "F^-=0, P(tau=F^-)=" << atom << (ok ? " < " : " >= ") << "p_c=" << t.p_c;
    return {ok, why.str()};
  }
  const bool ok = atom < t.vec_p_c;
  why << "F^-=" << dist.f_minus() << ">0, P(tau=F^-)=" << atom << (ok ? " < " : " >= ")
      << "oriented p_c=" << t.vec_p_c;
  return {ok, why.str()};
}

std::string to_string(WeightMode mode) { return mode == WeightMode::exact ? "exact" : "float"; }

WeightMode parse_weight_mode(const std::string& text) {
  if (text == "exact") return WeightMode::exact;
  if (text == "float" || text == "floating") return WeightMode::floating;
  throw std::invalid_argument("unknown weight mode '" + text + "' (expected exact|float)");
}

bool Acceptance::accepts(double x) const {
  const bool lo_ok = lower_closed ? x >= lower : x > lower;
  const bool hi_ok = upper_closed ? x <= upper : x < upper;
  return lo_ok && hi_ok;
}

namespace {

constexpr std::uint64_t kInitialDrawTag = 0x73616d706c65ULL;

void check_grid(int g) {
  if (g < 0 || g > 60) {
    throw std::invalid_argument("grid exponent must lie in [0, 60], got " + std::to_string(g));
  }
}

}  // namespace

std::int64_t WeightField::max_numerator() const {
  const auto v = static_cast<std::int64_t>(std::max<std::size_t>(box_->vertex_count(), 1));
  return (std::int64_t{1} << 62) / v;
}

std::int64_t WeightField::to_grid(double x) const {
  const double scaled = std::ldexp(x, grid_exponent_);
  if (!(scaled < static_cast<double>(max_numerator()))) {
    throw GridOverflow("weight " + std::to_string(x) + " overflows the 2^-" +
                       std::to_string(grid_exponent_) + " grid for a box of " +
                       std::to_string(box_->vertex_count()) + " vertices");
  }
  return std::llround(scaled);
}

double WeightField::draw(EdgeId e, std::uint32_t counter, std::uint64_t resample_seed,
                         std::uint64_t attempt) const {
  const std::uint64_t bits =
      counter == 0 ? derive_bits(master_seed_, {kInitialDrawTag, static_cast<std::uint64_t>(e)})
                   : derive_bits(master_seed_, {static_cast<std::uint64_t>(e), counter,
                                                resample_seed, attempt});
  return dist_->quantile(unit_interval(bits));
}

WeightField WeightField::sample(BoxPtr box, const Distribution& dist, WeightMode mode,
                                std::uint64_t master_seed, int grid_exponent) {
  check_grid(grid_exponent);
  WeightField f;
  f.box_ = std::move(box);
  f.mode_ = mode;
  f.grid_exponent_ = grid_exponent;
  f.master_seed_ = master_seed;
  f.dist_ = dist;
  const std::size_t m = f.box_->edge_count();
  f.counters_.assign(m, 0);
  if (mode == WeightMode::exact) {
    f.numerators_.resize(m);
    for (std::size_t e = 0; e < m; ++e) {
      f.numerators_[e] = f.to_grid(f.draw(static_cast<EdgeId>(e), 0, 0, 0));
    }
  } else {
    f.values_.resize(m);
    for (std::size_t e = 0; e < m; ++e) f.values_[e] = f.draw(static_cast<EdgeId>(e), 0, 0, 0);
  }
  return f;
}

WeightField WeightField::from_numerators(BoxPtr box, std::vector<std::int64_t> numerators,
                                         int grid_exponent) {
  check_grid(grid_exponent);
  if (numerators.size() != box->edge_count()) {
    throw std::invalid_argument("expected " + std::to_string(box->edge_count()) +
                                " edge weights, got " + std::to_string(numerators.size()));
  }
  WeightField f;
  f.box_ = std::move(box);
  f.mode_ = WeightMode::exact;
  f.grid_exponent_ = grid_exponent;
  for (std::int64_t n : numerators) {
    if (n < 0) throw std::invalid_argument("edge weights must be non-negative");
    if (n >= f.max_numerator()) throw GridOverflow("edge weight numerator too large");
  }
  f.numerators_ = std::move(numerators);
  f.counters_.assign(f.numerators_.size(), 0);
  return f;
}

WeightField WeightField::from_values(BoxPtr box, std::vector<double> values) {
  if (values.size() != box->edge_count()) {
    throw std::invalid_argument("expected " + std::to_string(box->edge_count()) +
                                " edge weights, got " + std::to_string(values.size()));
  }
  for (double v : values) {
    if (!(std::isfinite(v) && v >= 0)) throw std::invalid_argument("edge weights must be finite and non-negative");
  }
  WeightField f;
  f.box_ = std::move(box);
  f.mode_ = WeightMode::floating;
  f.values_ = std::move(values);
  f.counters_.assign(f.values_.size(), 0);
  return f;
}

double WeightField::weight(EdgeId e) const {
  const auto i = static_cast<std::size_t>(e);
  if (mode_ == WeightMode::exact) return std::ldexp(static_cast<double>(numerators_[i]), -grid_exponent_);
  return values_[i];
}

std::int64_t WeightField::numerator(EdgeId e) const {
  if (mode_ != WeightMode::exact) throw std::logic_error("numerator() requires an exact-mode field");
  return numerators_[static_cast<std::size_t>(e)];
}

bool WeightField::at_least(EdgeId e, double threshold) const {
  const auto i = static_cast<std::size_t>(e);
  if (mode_ == WeightMode::exact) {
    // Numerators below 2^53 convert exactly; the threshold is scaled exactly.
    return static_cast<double>(numerators_[i]) >= std::ldexp(threshold, grid_exponent_);
  }
  return values_[i] >= threshold;
}

double WeightField::represent(double x) const {
  if (mode_ == WeightMode::exact) {
    return std::ldexp(static_cast<double>(std::llround(std::ldexp(x, grid_exponent_))), -grid_exponent_);
  }
  return x;
}

WeightField WeightField::resample(const ResampleSpec& spec) const {
  if (spec.edges.empty()) throw std::invalid_argument("resample: edge set must be non-empty");
  if (!dist_) throw std::invalid_argument("resample: field carries no distribution");
  std::vector<EdgeId> edges = spec.edges;
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (EdgeId e : edges) {
    if (e < 0 || static_cast<std::size_t>(e) >= edge_count()) {
      throw std::out_of_range("resample: edge id " + std::to_string(e) + " outside the box");
    }
  }
  WeightField out = *this;
  out.generation_ = generation_ + 1;
  for (EdgeId e : edges) {
    const auto i = static_cast<std::size_t>(e);
    const std::uint32_t counter = ++out.counters_[i];
    double value = 0;
    if (spec.acceptance && spec.acceptance->is_point()) {
      // Conditioning on a null event: the conditional law is the point mass.
      value = spec.acceptance->lower;
    } else {
      bool accepted = false;
      for (std::uint64_t attempt = 0; attempt < kResampleRetryBudget; ++attempt) {
        value = represent(draw(e, counter, spec.resample_seed, attempt));
        if (!spec.acceptance || spec.acceptance->accepts(value)) {
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        throw RetryBudgetExhausted("resample: acceptance region has (numerically) zero mass for edge " +
                                   std::to_string(e));
      }
    }
    if (mode_ == WeightMode::exact) {
      out.numerators_[i] = to_grid(value);
    } else {
      out.values_[i] = value;
    }
  }
  return out;
}

bool operator==(const WeightField& a, const WeightField& b) {
  return *a.box_ == *b.box_ && a.mode_ == b.mode_ && a.grid_exponent_ == b.grid_exponent_ &&
         a.numerators_ == b.numerators_ && a.values_ == b.values_;
}

}  // namespace fpp
