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

#include "readlens/stats.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "readlens/corpus_io.hpp"
#include "readlens/error.hpp"
#include "readlens/gaze_features.hpp"
#include "readlens/kernels.hpp"

namespace readlens::stats {

namespace {

// Continued fraction for the incomplete beta, modified Lentz.
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_var(std::span<const double> v, double mean) {
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "correlation inputs differ in length (" + std::to_string(x.size()) +
                    " vs " + std::to_string(y.size()) + ")");
  }
  if (x.size() < 2) throw Error(ErrorKind::TooFewSamples, "correlation needs n >= 2");
}

std::string lemma_of(const std::string& text) {
  std::string s = io::to_lower(text);
  auto alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
  auto b = std::find_if(s.begin(), s.end(), alnum);
  auto e = std::find_if(s.rbegin(), s.rend(), alnum).base();
  return b < e ? std::string(b, e) : std::string();
}

std::array<double, 7> as_array(const gaze::FixationFeatures& f) {
  return {f.tFD, f.FFD, f.SFD, f.LFD, f.aFD, f.tFC, f.aFC};
}

// Rating of every layout word, 0 when out of lexicon or out of scale.
std::vector<int> word_ratings(const RatingLexicon& lexicon, const AoiLayout& layout) {
  std::vector<int> out(layout.words.size(), 0);
  for (std::size_t i = 0; i < layout.words.size(); ++i) {
    auto r = lexicon.rating(lemma_of(layout.words[i].text));
    if (r && *r >= 1 && *r <= lexicon.scale_points) out[i] = *r;
  }
  return out;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double t_two_sided_p(double t, double df) {
  if (!(df > 0)) throw Error(ErrorKind::Precondition, "t distribution needs df > 0");
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return std::clamp(incomplete_beta(df / 2.0, 0.5, x), 0.0, 1.0);
}

WelchResult welch_t(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw Error(ErrorKind::TooFewSamples, "welch_t needs at least 2 samples per group");
  }
  const double ma = mean_of(a), mb = mean_of(b);
  const double va = sample_var(a, ma), vb = sample_var(b, mb);
  if (va == 0.0 && vb == 0.0) {
    throw Error(ErrorKind::DegenerateVariance, "both samples have zero variance");
  }
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double qa = va / na, qb = vb / nb;
  WelchResult r;
  r.t = (ma - mb) / std::sqrt(qa + qb);
  r.df = (qa + qb) * (qa + qb) / (qa * qa / (na - 1) + qb * qb / (nb - 1));
  r.p = t_two_sided_p(r.t, r.df);
  return r;
}

ZScoreStats zscore_fit(const FeatureMatrix& m) { return kernels::column_moments(m); }

FeatureMatrix zscore_apply(const FeatureMatrix& m, const ZScoreStats& s) {
  if (s.mean.size() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                "z-score stats cover " + std::to_string(s.mean.size()) +
                    " columns, matrix has " + std::to_string(m.cols()));
  }
  FeatureMatrix out = m;
  kernels::standardize(out, s);
  return out;
}

FeatureMatrix zscore_fit_apply(const FeatureMatrix& m) {
  if (m.size() < 2) throw Error(ErrorKind::TooFewSamples, "z-score needs >= 2 rows");
  return zscore_apply(m, zscore_fit(m));
}

BinaryLabels binary_labels(const FeatureMatrix& m) {
  std::set<std::string> labels;
  for (const auto& r : m.rows) {
    if (!r.label || r.label->empty()) {
      throw Error(ErrorKind::NonBinaryLabels, "row '" + r.sample_id + "' has no label");
    }
    labels.insert(*r.label);
  }
  if (labels.size() != 2) {
    throw Error(ErrorKind::NonBinaryLabels,
                "expected 2 distinct labels, found " + std::to_string(labels.size()));
  }
  BinaryLabels out;
  out.first = labels.count("high") ? "high" : *labels.begin();
  out.second = out.first == *labels.begin() ? *labels.rbegin() : *labels.begin();
  for (const auto& r : m.rows) out.is_first.push_back(*r.label == out.first);
  return out;
}

std::vector<std::size_t> select_features(const FeatureMatrix& m, double alpha) {
  const auto groups = binary_labels(m);
  const auto p = kernels::column_pvalues(m, groups.is_first);
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < p.size(); ++c)
    if (p[c] && *p[c] < alpha) out.push_back(c);
  return out;
}

std::string write_selection(const FeatureMatrix& m, const std::vector<std::size_t>& cols) {
  std::string out;
  for (auto c : cols) out += m.feature_names.at(c) + "\n";
  return out;
}

std::vector<std::size_t> parse_selection(std::string_view text, const FeatureMatrix& m) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t c = 0; c < m.cols(); ++c) index.emplace(m.feature_names[c], c);
  std::vector<std::size_t> out;
  for (const auto& raw : io::split(text, '\n')) {
    std::string name(io::trim(raw));
    if (name.empty()) continue;
    auto it = index.find(name);
    if (it == index.end()) {
      throw Error(ErrorKind::DimensionMismatch,
                  "selected feature '" + name + "' is not in the matrix");
    }
    out.push_back(it->second);
  }
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const double mx = mean_of(x), my = mean_of(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorKind::ConstantInput, "correlation of a constant sequence");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::pair<double, double> pearson_test(std::span<const double> x,
                                       std::span<const double> y) {
  const double r = pearson(x, y);
  const double df = static_cast<double>(x.size()) - 2.0;
  if (df <= 0) return {r, 1.0};
  if (std::abs(r) >= 1.0) return {r, 0.0};
  const double t = r * std::sqrt(df / (1.0 - r * r));
  return {r, t_two_sided_p(t, df)};
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const auto rx = average_ranks(x), ry = average_ranks(y);
  return pearson(rx, ry);
}

double qwk(std::span<const int> a, std::span<const int> b, int k) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::DimensionMismatch, "qwk inputs differ in length");
  }
  if (a.empty()) throw Error(ErrorKind::EmptyInput, "qwk of empty ratings");
  if (k < 1) throw Error(ErrorKind::Precondition, "qwk needs k >= 1");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 1 || a[i] > k || b[i] < 1 || b[i] > k) {
      throw Error(ErrorKind::OutOfRange,
                  "rating outside 1.." + std::to_string(k) + " at position " +
                      std::to_string(i));
    }
  }
  if (k == 1) return 1.0;
  const auto K = static_cast<std::size_t>(k);
  std::vector<double> obs(K * K, 0.0), ha(K, 0.0), hb(K, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    obs[(a[i] - 1) * K + (b[i] - 1)] += 1;
    ha[a[i] - 1] += 1;
    hb[b[i] - 1] += 1;
  }
  const double n = static_cast<double>(a.size());
  const double norm = static_cast<double>((k - 1) * (k - 1));
  double num = 0, den = 0;
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = 0; j < K; ++j) {
      const double d = static_cast<double>(i) - static_cast<double>(j);
      const double w = d * d / norm;
      num += w * obs[i * K + j];
      den += w * ha[i] * hb[j] / n;
    }
  }
  if (den == 0.0) return 1.0;  // only reachable when every rating is identical
  return 1.0 - num / den;
}

int levenshtein(std::string_view a, std::string_view b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double levenshtein_sim(std::string_view a, std::string_view b) {
  const std::size_t n = std::max(a.size(), b.size());
  if (n == 0) return 1.0;
  const double s = 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(n);
  return std::clamp(s, 0.0, 1.0);
}

RatingProfile rating_feature_means(const std::vector<gaze::CleanedTrace>& traces,
                                   const RatingLexicon& lexicon,
                                   const AoiLayout& layout) {
  const auto ratings = word_ratings(lexicon, layout);
  struct Bucket {
    std::array<double, 7> sum{};
    double n = 0;
  };
  // participant -> rating -> pooled sums
  std::map<std::string, std::map<int, Bucket>> per_participant;
  for (const auto& t : traces) {
    const auto feats = gaze::word_fixation_features(t, layout);
    auto& buckets = per_participant[t.trace.participant_id];
    for (std::size_t w = 0; w < feats.size(); ++w) {
      if (ratings[w] == 0) continue;
      auto& b = buckets[ratings[w]];
      const auto v = as_array(feats[w]);
      for (std::size_t f = 0; f < 7; ++f) b.sum[f] += v[f];
      b.n += 1;
    }
  }
  RatingProfile out;
  out.factor = lexicon.factor;
  for (int r = 1; r <= lexicon.scale_points; ++r) {
    std::vector<std::array<double, 7>> means;
    for (const auto& [pid, buckets] : per_participant) {
      auto it = buckets.find(r);
      if (it == buckets.end()) continue;
      std::array<double, 7> m{};
      for (std::size_t f = 0; f < 7; ++f) m[f] = it->second.sum[f] / it->second.n;
      means.push_back(m);
    }
    if (means.empty()) continue;
    std::array<MeanSd, 7> entry{};
    const double n = static_cast<double>(means.size());
    for (std::size_t f = 0; f < 7; ++f) {
      double mu = 0;
      for (const auto& m : means) mu += m[f];
      mu /= n;
      double ss = 0;
      for (const auto& m : means) ss += (m[f] - mu) * (m[f] - mu);
      entry[f] = {mu, std::sqrt(ss / n)};
    }
    out.per_rating[r] = entry;
  }
  return out;
}

std::pair<double, double> rating_correlation(
    const std::vector<gaze::CleanedTrace>& traces, const RatingLexicon& lexicon,
    const AoiLayout& layout, bool sort_means, std::size_t feature) {
  if (feature >= 7) throw Error(ErrorKind::OutOfRange, "fixation feature index >= 7");
  if (traces.empty()) throw Error(ErrorKind::EmptyInput, "no traces");
  const auto ratings = word_ratings(lexicon, layout);
  const auto sp = static_cast<std::size_t>(lexicon.scale_points);
  std::map<std::string, std::vector<double>> totals;
  for (const auto& t : traces) {
    const auto feats = gaze::word_fixation_features(t, layout);
    auto& tot = totals[t.trace.participant_id];
    tot.resize(sp, 0.0);
    for (std::size_t w = 0; w < feats.size(); ++w) {
      if (ratings[w] == 0) continue;
      tot[ratings[w] - 1] += as_array(feats[w])[feature];
    }
  }
  std::vector<double> means(sp, 0.0), scale(sp);
  for (const auto& [pid, tot] : totals)
    for (std::size_t r = 0; r < sp; ++r) means[r] += tot[r];
  for (std::size_t r = 0; r < sp; ++r) {
    means[r] /= static_cast<double>(totals.size());
    scale[r] = static_cast<double>(r + 1);
  }
  if (sort_means) std::sort(means.begin(), means.end());
  return pearson_test(scale, means);
}

}  // namespace readlens::stats
