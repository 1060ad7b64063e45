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
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "readlens/error.hpp"

namespace readlens::stats {
namespace {

using namespace readlens::testing;


TEST(TDistribution, MatchesBoostOnRandomInputs) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> t(-8, 8), df(1, 60);
  for (int i = 0; i < 200; ++i) {
    const double tv = t(rng), dv = df(rng);
    EXPECT_NEAR(t_two_sided_p(tv, dv), boost_p(tv, dv), 1e-8) << tv << " " << dv;
  }
}

TEST(TDistribution, ZeroStatisticGivesOne) { EXPECT_NEAR(t_two_sided_p(0.0, 5), 1.0, 1e-12); }

TEST(IncompleteBeta, Endpoints) {
  EXPECT_DOUBLE_EQ(incomplete_beta(2, 3, 0), 0.0);
  EXPECT_DOUBLE_EQ(incomplete_beta(2, 3, 1), 1.0);
  // I_x(1, 1) = x.
  EXPECT_NEAR(incomplete_beta(1, 1, 0.3), 0.3, 1e-12);
}

TEST(Welch, AgreesWithOracle) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    auto a = draw(rng, 3 + i % 9, 0.0, 1.0 + i % 3);
    auto b = draw(rng, 4 + i % 7, 0.5, 2.0);
    const auto got = welch_t(a, b);
    const auto want = welch_oracle(a, b);
    EXPECT_NEAR(got.t, want.t, 1e-9);
    EXPECT_NEAR(got.df, want.df, 1e-9);
    EXPECT_NEAR(got.p, want.p, 1e-8);
  }
}

TEST(Welch, SwapNegatesStatistic) {
  std::mt19937_64 rng(3);
  auto a = draw(rng, 8, 1.0, 1.0), b = draw(rng, 11, 0.0, 3.0);
  const auto ab = welch_t(a, b), ba = welch_t(b, a);
  EXPECT_DOUBLE_EQ(ab.t, -ba.t);
  EXPECT_DOUBLE_EQ(ab.p, ba.p);
}

TEST(Welch, ConstantSamplesThrow) {
  std::vector<double> a{1, 1, 1}, b{2, 2};
  try {
    welch_t(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateVariance);
  }
}

TEST(Pearson, AgreesWithOracleAndAffineInvariance) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    auto x = draw(rng, 5 + i % 10, 0, 1);
    auto y = x;
    auto noise = draw(rng, x.size(), 0, 1);
    for (std::size_t k = 0; k < y.size(); ++k) y[k] = 0.5 * y[k] + noise[k];
    const double r = pearson(x, y);
    EXPECT_NEAR(r, pearson_oracle(x, y), 1e-9);
    std::vector<double> y2(y);
    for (auto& v : y2) v = 3.0 * v - 7.0;
    EXPECT_NEAR(pearson(x, y2), r, 1e-9);
    const auto [r2, p] = pearson_test(x, y);
    const double df = x.size() - 2.0;
    EXPECT_NEAR(p, boost_p(r2 * std::sqrt(df / (1 - r2 * r2)), df), 1e-8);
  }
}

TEST(Spearman, AgreesWithRankOracleAndMonotoneInvariance) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> small(0, 4);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> x(6 + i % 7), y(x.size());
    for (auto& v : x) v = small(rng);  // plenty of ties
    for (auto& v : y) v = small(rng);
    if (std::adjacent_find(x.begin(), x.end(), std::not_equal_to<>()) == x.end()) x[0] += 1;
    if (std::adjacent_find(y.begin(), y.end(), std::not_equal_to<>()) == y.end()) y[0] += 1;
    EXPECT_EQ(average_ranks(x), rank_oracle(x));
    const double rho = spearman(x, y);
    EXPECT_NEAR(rho, pearson_oracle(rank_oracle(x), rank_oracle(y)), 1e-9);
    std::vector<double> ex(x);
    for (auto& v : ex) v = std::exp(v);
    EXPECT_NEAR(spearman(ex, y), rho, 1e-12);
  }
}

TEST(Qwk, AgreesWithPairwiseOracle) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> r(1, 5);
  for (int i = 0; i < 50; ++i) {
    std::vector<int> a(4 + i % 12), b(a.size());
    for (auto& v : a) v = r(rng);
    for (auto& v : b) v = r(rng);
    b[0] = a[0] == 1 ? 5 : 1;  // never all equal pairs with zero spread
    EXPECT_NEAR(qwk(a, b, 5), qwk_oracle(a, b), 1e-9);
    EXPECT_NEAR(qwk(a, b, 5), qwk(b, a, 5), 1e-12);
  }
}

TEST(Qwk, IdentityAndReversal) {
  std::vector<int> a{1, 2, 3, 4, 5, 3, 2};
  EXPECT_DOUBLE_EQ(qwk(a, a, 5), 1.0);
  std::vector<int> up{1, 2}, down{2, 1};
  EXPECT_DOUBLE_EQ(qwk(up, down, 2), -1.0);
}

TEST(Levenshtein, MatchesOracleAndIsSymmetric) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> len(0, 6), ch(0, 2);
  for (int i = 0; i < 300; ++i) {
    std::string a(len(rng), 'a'), b(len(rng), 'a');
    for (auto& c : a) c = static_cast<char>('a' + ch(rng));
    for (auto& c : b) c = static_cast<char>('a' + ch(rng));
    EXPECT_EQ(levenshtein(a, b), levenshtein_oracle(a, b));
    EXPECT_EQ(levenshtein_sim(a, b), levenshtein_sim(b, a));
    EXPECT_EQ(levenshtein_sim(a, b) == 1.0, a == b);
  }
}

TEST(ZScore, ZeroMeanUnitSdAndConstantColumns) {
  std::mt19937_64 rng(19);
  FeatureMatrix m;
  m.feature_names = {"a", "b", "c"};
  for (int i = 0; i < 40; ++i) {
    auto v = draw(rng, 2, 3, 2);
    m.rows.push_back({"s" + std::to_string(i), "high", {v[0], i % 5 ? Cell(v[1]) : Cell(), 4.0}});
  }
  const auto z = zscore_fit_apply(m);
  for (std::size_t c = 0; c < 2; ++c) {
    double s = 0, ss = 0, n = 0;
    for (const auto& r : z.rows) {
      if (!r.values[c]) continue;
      s += *r.values[c];
      ss += *r.values[c] * *r.values[c];
      ++n;
    }
    EXPECT_NEAR(s / n, 0.0, 1e-9);
    EXPECT_NEAR(std::sqrt(ss / n), 1.0, 1e-9);
  }
  for (const auto& r : z.rows) EXPECT_EQ(r.values[2], Cell(0.0));
  EXPECT_FALSE(z.rows[0].values[1].has_value());
}

TEST(Selection, KeepsOnlySeparatingColumns) {
  FeatureMatrix m;
  m.feature_names = {"signal", "noise", "flat"};
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g(0, 1);
  for (int i = 0; i < 40; ++i) {
    const bool high = i < 20;
    m.rows.push_back({"s" + std::to_string(i), high ? "high" : "low",
                      {g(rng) + (high ? 4 : 0), g(rng), 1.0}});
  }
  const auto cols = select_features(m, 0.01);
  ASSERT_EQ(cols.size(), 1u);
  EXPECT_EQ(cols[0], 0u);
  EXPECT_EQ(parse_selection(write_selection(m, cols), m), cols);
}

TEST(BinaryLabels, HighIsFirstAndThirdLabelThrows) {
  FeatureMatrix m;
  m.feature_names = {"x"};
  m.rows = {{"a", "low", {1.0}}, {"b", "high", {2.0}}};
  const auto g = binary_labels(m);
  EXPECT_EQ(g.first, "high");
  EXPECT_EQ(g.is_first, (std::vector<bool>{false, true}));
  m.rows.push_back({"c", "mid", {3.0}});
  EXPECT_THROW(binary_labels(m), Error);
}

}  // namespace
}  // namespace readlens::stats
