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

#include "fpp/harness/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace fpp::harness {

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: zero trials");
  if (successes > trials) throw std::invalid_argument("wilson_interval: successes exceed trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1 + z2 / n;
  const double center = (p + z2 / (2 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double Moments::stderr_mean() const { return n > 0 ? sd / std::sqrt(static_cast<double>(n)) : 0; }

Moments moments(std::span<const double> xs) {
  Moments m;
  m.n = xs.size();
  if (xs.empty()) return m;
  double sum = 0;
  m.min = xs[0];
  m.max = xs[0];
  for (double x : xs) {
    sum += x;
    m.min = std::min(m.min, x);
    m.max = std::max(m.max, x);
  }
  m.mean = sum / static_cast<double>(m.n);
  if (m.n > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(ss / static_cast<double>(m.n - 1));
  }
  return m;
}

double abscissa_value(Abscissa a, double scale) {
  switch (a) {
    case Abscissa::sqrt_k: return std::sqrt(scale);
    case Abscissa::k:
    case Abscissa::l1: return scale;
  }
  return scale;
}

DecayFit estimate_decay(std::span<const DecayPoint> series, Abscissa abscissa, double confidence) {
  if (series.size() < 3) throw std::invalid_argument("estimate_decay: need at least 3 scales");
  if (!(confidence > 0 && confidence < 1)) throw std::invalid_argument("estimate_decay: confidence must be in (0,1)");
  DecayFit fit;
  bool all_counts = true;
  for (const auto& pt : series) {
    if (!(pt.probability >= 0 && pt.probability <= 1)) {
      throw std::invalid_argument("estimate_decay: probabilities must lie in [0,1]");
    }
    double p = pt.probability;
    bool replaced = false;
    if (p == 0) {
      if (pt.trials == 0) throw std::invalid_argument("estimate_decay: zero probability without a trial count");
      p = wilson_interval(0, pt.trials).upper;
      replaced = true;
    }
    all_counts = all_counts && pt.trials > 0;
    fit.abscissae.push_back(abscissa_value(abscissa, pt.scale));
    fit.probabilities.push_back(p);
    fit.replaced.push_back(replaced);
  }
  const std::size_t n = series.size();
  bool distinct = false;
  for (std::size_t i = 1; i < n; ++i) distinct = distinct || fit.abscissae[i] != fit.abscissae[0];
  if (!distinct) throw std::invalid_argument("estimate_decay: degenerate series (all abscissae equal)");

  // Delta-method variance of log(p-hat) is (1-p)/(n p); the continuity
  // adjustment keeps it finite at p in {0, 1}.
  std::vector<double> w(n, 1.0);
  fit.weighted = all_counts;
  if (all_counts) {
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(series[i].trials);
      const double f = fit.probabilities[i] * t;
      const double pa = (f + 0.5) / (t + 1);
      w[i] = t * pa / (1 - pa);
    }
  }
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += w[i];
    sx += w[i] * fit.abscissae[i];
    sy += w[i] * std::log(fit.probabilities[i]);
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = fit.abscissae[i] - mx;
    sxx += w[i] * dx * dx;
    sxy += w[i] * dx * (std::log(fit.probabilities[i]) - my);
  }
  const double slope = sxy / sxx;
  fit.rate = -slope;
  fit.intercept = my - slope * mx;

  double se = 0;
  double q = 0;
  const double tail = 0.5 + confidence / 2;
  if (fit.weighted) {
    se = std::sqrt(1 / sxx);
    q = boost::math::quantile(boost::math::normal_distribution<double>(), tail);
  } else {
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = std::log(fit.probabilities[i]) - (fit.intercept + slope * fit.abscissae[i]);
      rss += r * r;
    }
    se = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    q = boost::math::quantile(boost::math::students_t_distribution<double>(static_cast<double>(n - 2)), tail);
  }
  fit.rate_ci = {fit.rate - q * se, fit.rate + q * se};
  fit.sign_test_passed = fit.rate_ci.lower > 0;
  return fit;
}

bool is_non_increasing(std::span<const double> ps) {
  for (std::size_t i = 1; i < ps.size(); ++i) {
    if (ps[i] > ps[i - 1]) return false;
  }
  return true;
}

bool is_decreasing(std::span<const double> ps) {
  return !ps.empty() && is_non_increasing(ps) && ps.front() > ps.back();
}

}  // namespace fpp::harness
