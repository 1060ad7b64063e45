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

#include "readlens/kernels.hpp"

#include <random>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "readlens/stats.hpp"

namespace readlens::kernels {
namespace {

std::vector<gaze::CleanedTrace> cleaned(const AoiLayout& layout, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<gaze::CleanedTrace> out;
  for (int i = 0; i < n; ++i)
    out.push_back(gaze::clean_trace(testing::make_trace(layout, rng), layout, {}));
  return out;
}

FeatureMatrix random_matrix(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0, 1);
  std::uniform_real_distribution<double> u(0, 1);
  FeatureMatrix m;
  for (int c = 0; c < cols; ++c) m.feature_names.push_back("c" + std::to_string(c));
  for (int r = 0; r < rows; ++r) {
    FeatureMatrix::Row row{"r" + std::to_string(r), r % 2 ? "low" : "high", {}};
    for (int c = 0; c < cols; ++c)
      row.values.push_back(u(rng) < 0.1 ? Cell() : Cell(g(rng) + (r % 2) * (c % 3)));
    m.rows.push_back(std::move(row));
  }
  return m;
}

TEST(Kernels, FeatureRowsMatchSerial) {
  const auto layout = testing::make_layout({});
  const auto traces = cleaned(layout, 12, 1);
  EXPECT_EQ(feature_rows(traces, layout), feature_rows_serial(traces, layout));
}

TEST(Kernels, MomentsAndStandardizeMatchSerial) {
  const auto m = random_matrix(50, 40, 2);
  const auto par = column_moments(m);
  EXPECT_EQ(par, column_moments_serial(m));
  EXPECT_EQ(par, stats::zscore_fit(m));
  auto a = m, b = m;
  standardize(a, par);
  standardize_serial(b, par);
  EXPECT_EQ(a, b);
}

TEST(Kernels, PvaluesMatchSerial) {
  const auto m = random_matrix(40, 30, 3);
  const auto groups = stats::binary_labels(m).is_first;
  EXPECT_EQ(column_pvalues(m, groups), column_pvalues_serial(m, groups));
}

TEST(Kernels, PairScoresMatchSerialAndLayout) {
  std::vector<std::string> a{"horse", "camel", "work"}, b{"horse", "house", "walk", "x"};
  const PairScorer s = [](const std::string& x, const std::string& y) {
    return stats::levenshtein_sim(x, y);
  };
  const auto par = pair_scores(a, b, s);
  EXPECT_EQ(par, pair_scores_serial(a, b, s));
  ASSERT_EQ(par.size(), 12u);
  EXPECT_DOUBLE_EQ(par[0 * 4 + 0], 1.0);
  EXPECT_DOUBLE_EQ(par[1 * 4 + 3], 0.0);
}

TEST(Kernels, ThreadCountIsPositive) { EXPECT_GE(max_threads(), 1); }

}  // namespace
}  // namespace readlens::kernels
