/*
 * Copyright 2026 The Readlens Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

namespace readlens::testing {
namespace {

// Best score over every alignment, enumerated by recursion on the three
// possible last columns.
double exhaustive(const std::vector<int>& a, const std::vector<int>& b, std::size_t i,
                  std::size_t j) {
  if (i == 0 && j == 0) return 0.0;
  double best = -std::numeric_limits<double>::infinity();
  if (i > 0 && j > 0)
    best = std::max(best, exhaustive(a, b, i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 2.0 : -1.0));
  if (i > 0) best = std::max(best, exhaustive(a, b, i - 1, j) - 0.5);
  if (j > 0) best = std::max(best, exhaustive(a, b, i, j - 1) - 0.5);
  return best;
}

}  // namespace

double exhaustive_alignment(const std::vector<int>& a, const std::vector<int>& b) {
  return exhaustive(a, b, a.size(), b.size());
}

std::vector<std::vector<int>> all_sequences(int max_len, int alphabet) {
  std::vector<std::vector<int>> out{{}};
  for (std::size_t start = 0; start < out.size(); ++start) {
    if (static_cast<int>(out[start].size()) == max_len) continue;
    for (int s = 0; s < alphabet; ++s) {
      auto next = out[start];
      next.push_back(s);
      out.push_back(std::move(next));
    }
  }
  return out;
}

double boost_p(double t, double df) {
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

std::vector<double> draw(std::mt19937_64& rng, int n, double mu, double sd) {
  std::normal_distribution<double> g(mu, sd);
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

// Textbook Welch, long double accumulation.
stats::WelchResult welch_oracle(const std::vector<double>& a, const std::vector<double>& b) {
  auto moments = [](const std::vector<double>& v) {
    long double m = 0, s = 0;
    for (double x : v) m += x;
    m /= v.size();
    for (double x : v) s += (x - m) * (x - m);
    return std::pair<double, double>(m, s / (v.size() - 1));
  };
  auto [ma, va] = moments(a);
  auto [mb, vb] = moments(b);
  const double qa = va / a.size(), qb = vb / b.size();
  stats::WelchResult r;
  r.t = (ma - mb) / std::sqrt(qa + qb);
  r.df = (qa + qb) * (qa + qb) /
         (qa * qa / (a.size() - 1) + qb * qb / (b.size() - 1));
  r.p = boost_p(r.t, r.df);
  return r;
}

double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

// Rank by counting: 1 + #smaller + (#equal - 1) / 2.
std::vector<double> rank_oracle(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, eq = 0;
    for (double w : v) {
      if (w < v[i]) ++less;
      if (w == v[i]) ++eq;
    }
    r[i] = 1 + less + (eq - 1) / 2;
  }
  return r;
}

// Kappa written as observed vs all-pairs squared disagreement.
double qwk_oracle(const std::vector<int>& a, const std::vector<int>& b) {
  double obs = 0, exp = 0;
  const double n = a.size();
  for (std::size_t i = 0; i < a.size(); ++i) obs += (a[i] - b[i]) * (a[i] - b[i]);
  for (int x : a)
    for (int y : b) exp += (x - y) * (x - y);
  return 1.0 - (obs / n) / (exp / (n * n));
}

int levenshtein_oracle(const std::string& a, const std::string& b) {
  // Plain recursion with memo; fine for short strings.
  std::vector<std::vector<int>> memo(a.size() + 1, std::vector<int>(b.size() + 1, -1));
  std::function<int(std::size_t, std::size_t)> d = [&](std::size_t i, std::size_t j) {
    if (i == 0) return static_cast<int>(j);
    if (j == 0) return static_cast<int>(i);
    int& m = memo[i][j];
    if (m >= 0) return m;
    m = std::min({d(i - 1, j) + 1, d(i, j - 1) + 1,
                  d(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1)});
    return m;
  };
  return d(a.size(), b.size());
}

}  // namespace readlens::testing
