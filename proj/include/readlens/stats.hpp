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

#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "readlens/feature_matrix.hpp"
#include "readlens/gaze_clean.hpp"
#include "readlens/types.hpp"

namespace readlens::stats {

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

// Two-sided p-value of a t statistic with `df` degrees of freedom.
double t_two_sided_p(double t, double df);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
};

// Sample variances, Welch-Satterthwaite df. Throws DegenerateVariance when
// both samples are constant.
WelchResult welch_t(std::span<const double> a, std::span<const double> b);

// Per-column mean and population SD. Missing cells are skipped.
struct ZScoreStats {
  std::vector<double> mean;
  std::vector<double> sd;

  bool operator==(const ZScoreStats&) const = default;
};

ZScoreStats zscore_fit(const FeatureMatrix& m);
// (v - mean) / sd; columns with sd == 0 become 0. Missing cells stay missing.
FeatureMatrix zscore_apply(const FeatureMatrix& m, const ZScoreStats& s);
FeatureMatrix zscore_fit_apply(const FeatureMatrix& m);

// Splits the rows into the two label groups. The "high" label, when present,
// is the first group; otherwise labels are taken in sorted order.
struct BinaryLabels {
  std::string first;
  std::string second;
  std::vector<bool> is_first;  // per row
};
BinaryLabels binary_labels(const FeatureMatrix& m);

// Columns whose Welch p-value between the two label groups is below alpha,
// ascending. Degenerate columns are never selected.
std::vector<std::size_t> select_features(const FeatureMatrix& m, double alpha);
std::string write_selection(const FeatureMatrix& m,
                            const std::vector<std::size_t>& cols);
std::vector<std::size_t> parse_selection(std::string_view text,
                                         const FeatureMatrix& m);

double pearson(std::span<const double> x, std::span<const double> y);
// r and its two-sided p-value (t with n - 2 df).
std::pair<double, double> pearson_test(std::span<const double> x,
                                       std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);
// Average ranks, 1-based; ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> x);

// Quadratic weighted kappa over ratings 1..k.
double qwk(std::span<const int> a, std::span<const int> b, int k);

int levenshtein(std::string_view a, std::string_view b);
double levenshtein_sim(std::string_view a, std::string_view b);

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

// rating -> per fixation feature (tFD, FFD, SFD, LFD, aFD, tFC, aFC).
struct RatingProfile {
  RatingFactor factor = RatingFactor::WordFrequency;
  std::map<int, std::array<MeanSd, 7>> per_rating;
};

// For every rating bucket: each participant's mean feature value over the
// bucket's words (pooled over that participant's traces), then mean and
// population SD across participants. Words missing from the lexicon are
// excluded; buckets without words are absent.
RatingProfile rating_feature_means(const std::vector<gaze::CleanedTrace>& traces,
                                   const RatingLexicon& lexicon,
                                   const AoiLayout& layout);

// Per participant, the feature total in each rating 1..scale_points; the
// cross-participant means (optionally sorted ascending) are correlated with
// the rating scale. Returns (r, p).
std::pair<double, double> rating_correlation(
    const std::vector<gaze::CleanedTrace>& traces, const RatingLexicon& lexicon,
    const AoiLayout& layout, bool sort_means, std::size_t feature = 0);

}  // namespace readlens::stats
