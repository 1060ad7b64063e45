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

#include "readlens/learn.hpp"

#include <algorithm>
#include <random>
#include <set>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "generators.hpp"
#include "readlens/error.hpp"

namespace readlens::learn {
namespace {

std::vector<std::string> labels(int high, int low) {
  std::vector<std::string> l(high, "high");
  l.insert(l.end(), low, "low");
  return l;
}

TEST(Split, SizesAndStratification) {
  const auto l = labels(30, 10);
  const auto [tr, te] = split_indices(l, {0.7, 5, 3});
  EXPECT_EQ(tr.size(), 28u);
  EXPECT_EQ(te.size(), 12u);
  const auto highs = std::count_if(tr.begin(), tr.end(), [&](auto i) { return l[i] == "high"; });
  EXPECT_EQ(highs, 21);
  std::set<std::size_t> all(tr.begin(), tr.end());
  all.insert(te.begin(), te.end());
  EXPECT_EQ(all.size(), 40u);
}

TEST(Split, SeedDeterminesSplit) {
  const auto l = labels(20, 20);
  EXPECT_EQ(split_indices(l, {0.7, 5, 9}), split_indices(l, {0.7, 5, 9}));
  EXPECT_NE(split_indices(l, {0.7, 5, 9}), split_indices(l, {0.7, 5, 10}));
}

TEST(Split, RejectsBadFraction) {
  EXPECT_THROW(split_indices(labels(5, 5), {1.0, 5, 0}), Error);
  EXPECT_THROW(split_indices(labels(5, 1), {0.5, 5, 0}), Error);
}

TEST(Kfold, PartitionsRows) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto l = labels(23, 14);
    const auto folds = kfold_indices(l, {0.7, 5, seed});
    std::vector<int> seen(l.size(), 0);
    for (const auto& f : folds) {
      EXPECT_GE(f.size(), 7u);
      EXPECT_LE(f.size(), 8u);
      for (auto i : f) ++seen[i];
    }
    for (int s : seen) EXPECT_EQ(s, 1);
  }
}

TEST(Classifier, SeparableDataIsLearnedPerfectly) {
  const auto m = testing::make_separable(200, 20, 1.0, 5);
  const auto cv = cross_validate_classifier(m, {0.7, 5, 5}, {}, {true, false});
  EXPECT_DOUBLE_EQ(cv.mean, 1.0);
  const auto model = train_classifier(m);
  const auto pred = predict_labels(model, m);
  EXPECT_DOUBLE_EQ(uar(pred, string_labels(m)), 1.0);
}

TEST(Classifier, PredictionsSurviveFeatureScalingThroughStandardization) {
  const auto m = testing::make_separable(80, 5, 0.2, 7);
  auto scaled = m;
  for (auto& r : scaled.rows)
    for (auto& v : r.values) *v *= 37.0;
  auto fit = [](const FeatureMatrix& x) {
    const auto z = stats::zscore_fit(x);
    return predict_labels(train_classifier(stats::zscore_apply(x, z)), stats::zscore_apply(x, z));
  };
  EXPECT_EQ(fit(m), fit(scaled));
}

TEST(Metrics, UarInvariantUnderRelabelingCrateNot) {
  std::vector<std::string> truth{"a", "a", "a", "a", "a", "a", "a", "a", "b", "b"};
  std::vector<std::string> pred{"a", "a", "a", "a", "a", "a", "a", "a", "a", "b"};
  EXPECT_DOUBLE_EQ(c_rate(pred, truth), 0.9);
  EXPECT_DOUBLE_EQ(uar(pred, truth), 0.75);
  auto swap = [](std::vector<std::string> v) {
    for (auto& s : v) s = s == "a" ? "b" : "a";
    return v;
  };
  EXPECT_DOUBLE_EQ(uar(swap(pred), swap(truth)), 0.75);
  std::vector<std::string> pred2(10, "a");
  EXPECT_NE(c_rate(pred2, truth), uar(pred2, truth));
}

TEST(Metrics, RoundingAndRmse) {
  EXPECT_EQ(round_score(3.6), 4);
  EXPECT_EQ(round_score(2.5), 3);
  EXPECT_EQ(round_score(-2.5), -3);
  EXPECT_DOUBLE_EQ(rmse({1, 2}, {2, 4}), std::sqrt(2.5));
}

TEST(Regressor, ResidualsOrthogonalToCenteredFeatures) {
  for (int p : {3, 40}) {  // primal and dual paths
    std::mt19937_64 rng(p);
    std::normal_distribution<double> g(0, 1);
    FeatureMatrix m;
    for (int c = 0; c < p; ++c) m.feature_names.push_back("f" + std::to_string(c));
    std::vector<double> y;
    for (int i = 0; i < 25; ++i) {
      FeatureMatrix::Row r{"s" + std::to_string(i), std::to_string(1 + i % 5), {}};
      double target = 0;
      for (int c = 0; c < p; ++c) {
        const double v = g(rng);
        r.values.push_back(v);
        target += (c % 2 ? 0.5 : -0.3) * v;
      }
      y.push_back(target + g(rng));
      m.rows.push_back(std::move(r));
    }
    TrainMeta meta;
    meta.c = 2.0;
    const auto model = train_regressor(m, y, meta);
    const auto pred = predict_values(model, m);
    // Ridge optimum: X_c^T (y - yhat) = lambda w.
    for (int c = 0; c < p; ++c) {
      double mean = 0;
      for (const auto& r : m.rows) mean += *r.values[c];
      mean /= m.size();
      double dot = 0;
      for (std::size_t i = 0; i < m.size(); ++i) dot += (*m.rows[i].values[c] - mean) * (y[i] - pred[i]);
      EXPECT_NEAR(dot, model.weights[c] / meta.c, 1e-7);
    }
    double resid = 0;
    for (std::size_t i = 0; i < y.size(); ++i) resid += y[i] - pred[i];
    EXPECT_NEAR(resid, 0.0, 1e-8);
  }
}

TEST(Model, RoundTrip) {
  const auto m = testing::make_separable(40, 4, 1.0, 9);
  auto model = train_classifier(m);
  model.zscore = stats::zscore_fit(m);
  model.seed = 42;
  const auto back = parse_model_text(write_model(model));
  EXPECT_EQ(back.feature_names, model.feature_names);
  EXPECT_EQ(back.weights, model.weights);
  EXPECT_EQ(back.bias, model.bias);
  EXPECT_EQ(back.seed, 42u);
  EXPECT_EQ(back.positive_label, model.positive_label);
  ASSERT_TRUE(back.zscore.has_value());
  EXPECT_EQ(*back.zscore, *model.zscore);
  EXPECT_EQ(write_model(back), write_model(model));
}

TEST(Classifier, ShuffledLabelsGiveChance) {
  double sum = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto m = testing::make_separable(200, 20, 1.0, 100 + seed);
    std::mt19937_64 rng(seed);
    std::vector<std::optional<std::string>> l;
    for (const auto& r : m.rows) l.push_back(r.label);
    std::shuffle(l.begin(), l.end(), rng);
    for (std::size_t i = 0; i < l.size(); ++i) m.rows[i].label = l[i];
    sum += cross_validate_classifier(m, {0.7, 5, seed}, {}, {true, false}).mean;
  }
  EXPECT_GT(sum / 20, 0.35);
  EXPECT_LT(sum / 20, 0.65);
}

}  // namespace
}  // namespace readlens::learn
