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

// Splitting, cross-validation and two linear reference models: L2
// logistic regression for the binary reading label and ridge regression
// for summary scores. Missing cells are read as 0, which is the column mean
// once the matrix has been standardized.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "readlens/feature_matrix.hpp"
#include "readlens/stats.hpp"

namespace readlens::learn {

struct SplitSpec {
  double train_fraction = 0.7;
  int folds = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

using Indices = std::vector<std::size_t>;

// Stratified by label when `stratify`; n_train = round(fraction * N) split
// across classes by largest remainder. Both index lists come back sorted.
std::pair<Indices, Indices> split_indices(const std::vector<std::string>& labels,
                                          const SplitSpec& spec, bool stratify = true);
std::pair<FeatureMatrix, FeatureMatrix> split(const FeatureMatrix& m,
                                              const SplitSpec& spec,
                                              bool stratify = true);

// Test-fold indices. Each class is shuffled, then dealt round-robin into the
// folds, continuing the deal across classes.
std::vector<Indices> kfold_indices(const std::vector<std::string>& labels,
                                   const SplitSpec& spec, bool stratify = true);

enum class ModelKind { Classifier, Regressor };

struct TrainMeta {
  double c = 1.0;
  double tolerance = 1e-3;
  int max_iters = 1000;
};

struct LinearModel {
  ModelKind kind = ModelKind::Classifier;
  std::vector<std::string> feature_names;
  std::vector<double> weights;
  double bias = 0.0;
  TrainMeta meta;
  // Classifier only: label of the positive (+1) and negative class.
  std::string positive_label;
  std::string negative_label;
  int iterations = 0;
  // Optional preprocessing carried with the model.
  std::optional<stats::ZScoreStats> zscore;
  std::uint64_t seed = 0;
  double train_fraction = 0.7;
  int folds = 5;

  double decision(const std::vector<Cell>& row) const;
};

// Minimizes 0.5 |w|^2 + c * sum logloss by gradient descent with Armijo
// backtracking; stops when the relative loss change drops below tolerance.
LinearModel train_classifier(const FeatureMatrix& train, const TrainMeta& meta = {});

// Ridge with penalty 1/c on the weights only. Targets come from `targets`.
LinearModel train_regressor(const FeatureMatrix& train, const std::vector<double>& targets,
                            const TrainMeta& meta = {});

std::vector<std::string> predict_labels(const LinearModel& model, const FeatureMatrix& m);
std::vector<double> predict_values(const LinearModel& model, const FeatureMatrix& m);

// Nearest integer, halves away from zero.
int round_score(double v);

// Numeric targets parsed from the label column.
std::vector<double> numeric_labels(const FeatureMatrix& m);
std::vector<std::string> string_labels(const FeatureMatrix& m);

double c_rate(const std::vector<std::string>& pred, const std::vector<std::string>& truth);
// Mean recall over the classes that occur in `truth`.
double uar(const std::vector<std::string>& pred, const std::vector<std::string>& truth);
double rmse(const std::vector<double>& pred, const std::vector<double>& truth);

struct CvResult {
  std::vector<double> per_fold;
  double mean = 0.0;
};
struct CvOptions {
  // Fit z-score statistics on the training folds and apply them to both.
  bool standardize = false;
  // Regressor only: score rounded predictions.
  bool round_predictions = false;
};

// Mean accuracy over stratified folds.
CvResult cross_validate_classifier(const FeatureMatrix& m, const SplitSpec& spec,
                                   const TrainMeta& meta = {}, const CvOptions& opts = {});
// Mean RMSE over folds.
CvResult cross_validate_regressor(const FeatureMatrix& m, const SplitSpec& spec,
                                  const TrainMeta& meta = {}, const CvOptions& opts = {});

std::string write_model(const LinearModel& model);
LinearModel parse_model_text(std::string_view text);
LinearModel read_model(const std::filesystem::path& path);

}  // namespace readlens::learn
