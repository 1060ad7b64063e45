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

// Slow, obviously-correct reference implementations for the tests.

#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "readlens/stats.hpp"

namespace readlens::testing {

// Two-sided Student-t p-value from Boost.Math.
double boost_p(double t, double df);
std::vector<double> draw(std::mt19937_64& rng, int n, double mu, double sd);
stats::WelchResult welch_oracle(const std::vector<double>& a, const std::vector<double>& b);
double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y);
std::vector<double> rank_oracle(const std::vector<double>& v);
double qwk_oracle(const std::vector<int>& a, const std::vector<int>& b);
int levenshtein_oracle(const std::string& a, const std::string& b);

// Global alignment (match 2, mismatch -1, gap -0.5) by trying every path.
double exhaustive_alignment(const std::vector<int>& a, const std::vector<int>& b);
// Every sequence of length 0..max_len over {0, .., alphabet-1}.
std::vector<std::vector<int>> all_sequences(int max_len, int alphabet);

}  // namespace readlens::testing
