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

// Data-parallel hot loops. Each OpenMP kernel has a *_serial twin with the
// same contract; the tests hold them equal and bench/ compares their speed.
// Results never depend on the thread count: every output slot is written by
// exactly one iteration and no reduction crosses iterations.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "readlens/feature_matrix.hpp"
#include "readlens/gaze_clean.hpp"
#include "readlens/stats.hpp"

namespace readlens::kernels {

// Unimputed feature rows, one per trace.
std::vector<std::vector<Cell>> feature_rows(const std::vector<gaze::CleanedTrace>& traces,
                                            const AoiLayout& layout);
std::vector<std::vector<Cell>> feature_rows_serial(
    const std::vector<gaze::CleanedTrace>& traces, const AoiLayout& layout);

// Column mean and population SD over present cells.
stats::ZScoreStats column_moments(const FeatureMatrix& m);
stats::ZScoreStats column_moments_serial(const FeatureMatrix& m);

// In place (v - mean) / sd, zero-variance columns to 0.
void standardize(FeatureMatrix& m, const stats::ZScoreStats& s);
void standardize_serial(FeatureMatrix& m, const stats::ZScoreStats& s);

// Welch p-value per column between rows with in_first true and false.
// Empty when the column is degenerate or a group has < 2 present cells.
std::vector<std::optional<double>> column_pvalues(const FeatureMatrix& m,
                                                  const std::vector<bool>& in_first);
std::vector<std::optional<double>> column_pvalues_serial(
    const FeatureMatrix& m, const std::vector<bool>& in_first);

// Row-major |a| x |b| matrix of scorer(a[i], b[j]). The scorer must be safe
// to call concurrently.
using PairScorer = std::function<double(const std::string&, const std::string&)>;
std::vector<double> pair_scores(const std::vector<std::string>& a,
                                const std::vector<std::string>& b,
                                const PairScorer& scorer);
std::vector<double> pair_scores_serial(const std::vector<std::string>& a,
                                       const std::vector<std::string>& b,
                                       const PairScorer& scorer);

int max_threads();

}  // namespace readlens::kernels
