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
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include <Eigen/Dense>
#include <json.hpp>

#include "readlens/corpus_io.hpp"
#include "readlens/error.hpp"

namespace readlens::learn {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Indices per class, classes in sorted order. One class when not stratified.
std::vector<Indices> by_class(const std::vector<std::string>& labels, bool stratify) {
  std::map<std::string, Indices> groups;
  for (std::size_t i = 0; i < labels.size(); ++i)
    groups[stratify ? labels[i] : std::string()].push_back(i);
  std::vector<Indices> out;
  for (auto& [_, idx] : groups) out.push_back(std::move(idx));
  return out;
}

MatrixXd dense(const FeatureMatrix& m) {
  MatrixXd x(m.size(), m.cols());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t c = 0; c < m.cols(); ++c)
      x(i, c) = m.rows[i].values[c].value_or(0.0);
  return x;
}

// log(1 + exp(-z)) without overflow.
double log1pexp_neg(double z) {
  return z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

struct LogisticObjective {
  const MatrixXd& x;
  const VectorXd& y;  // +1 / -1
  double c;

  double loss(const VectorXd& w, double b) const {
    VectorXd z = (x * w).array() + b;
    double l = 0.5 * w.squaredNorm();
    for (Eigen::Index i = 0; i < z.size(); ++i) l += c * log1pexp_neg(y[i] * z[i]);
    return l;
  }

  void gradient(const VectorXd& w, double b, VectorXd& gw, double& gb) const {
    VectorXd z = (x * w).array() + b;
    VectorXd coef(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) coef[i] = -c * y[i] * sigmoid(-y[i] * z[i]);
    gw = w + x.transpose() * coef;
    gb = coef.sum();
  }
};

double accuracy(const std::vector<std::string>& pred, const std::vector<std::string>& truth) {
  return c_rate(pred, truth);
}

std::pair<FeatureMatrix, FeatureMatrix> fold_data(const FeatureMatrix& m,
                                                  const Indices& train, const Indices& test,
                                                  bool standardize) {
  FeatureMatrix tr = m.select_rows(train);
  FeatureMatrix te = m.select_rows(test);
  if (standardize) {
    const auto z = stats::zscore_fit(tr);
    tr = stats::zscore_apply(tr, z);
    te = stats::zscore_apply(te, z);
  }
  return {std::move(tr), std::move(te)};
}

}  // namespace

void SplitSpec::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorKind::Precondition, "train fraction must lie in (0, 1)");
  }
  if (folds < 2) throw Error(ErrorKind::Precondition, "need at least 2 folds");
}

std::pair<Indices, Indices> split_indices(const std::vector<std::string>& labels,
                                          const SplitSpec& spec, bool stratify) {
  spec.validate();
  const std::size_t n = labels.size();
  auto classes = by_class(labels, stratify);
  for (const auto& cls : classes) {
    if (cls.size() < 2) {
      throw Error(ErrorKind::TooFewSamples,
                  "split needs at least 2 rows per class, label '" + labels[cls[0]] +
                      "' has 1");
    }
  }
  const auto n_train = static_cast<std::size_t>(std::lround(spec.train_fraction * n));
  if (n_train == 0 || n_train >= n) {
    throw Error(ErrorKind::TooFewSamples, "split leaves an empty train or test set");
  }
  // Floor allocation per class, then the largest remainders get one more.
  std::vector<std::size_t> take(classes.size());
  std::vector<std::pair<double, std::size_t>> rem;
  std::size_t given = 0;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const double exact = static_cast<double>(n_train) * classes[k].size() / n;
    take[k] = static_cast<std::size_t>(std::floor(exact));
    given += take[k];
    rem.emplace_back(exact - std::floor(exact), k);
  }
  std::stable_sort(rem.begin(), rem.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; given < n_train; ++r, ++given) ++take[rem[r].second];

  std::mt19937_64 rng(spec.seed);
  Indices train, test;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    auto cls = classes[k];
    std::shuffle(cls.begin(), cls.end(), rng);
    train.insert(train.end(), cls.begin(), cls.begin() + take[k]);
    test.insert(test.end(), cls.begin() + take[k], cls.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {train, test};
}

std::pair<FeatureMatrix, FeatureMatrix> split(const FeatureMatrix& m, const SplitSpec& spec,
                                              bool stratify) {
  auto [tr, te] = split_indices(string_labels(m), spec, stratify);
  return {m.select_rows(tr), m.select_rows(te)};
}

std::vector<Indices> kfold_indices(const std::vector<std::string>& labels,
                                   const SplitSpec& spec, bool stratify) {
  spec.validate();
  const auto k = static_cast<std::size_t>(spec.folds);
  if (labels.size() < k) {
    throw Error(ErrorKind::TooFewSamples, std::to_string(labels.size()) +
                                              " rows cannot fill " + std::to_string(k) +
                                              " folds");
  }
  std::mt19937_64 rng(spec.seed);
  std::vector<Indices> folds(k);
  std::size_t deal = 0;
  for (auto cls : by_class(labels, stratify)) {
    std::shuffle(cls.begin(), cls.end(), rng);
    for (auto i : cls) folds[deal++ % k].push_back(i);
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

double LinearModel::decision(const std::vector<Cell>& row) const {
  if (row.size() != weights.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "row has " + std::to_string(row.size()) + " features, model expects " +
                    std::to_string(weights.size()));
  }
  double z = bias;
  for (std::size_t c = 0; c < row.size(); ++c) z += weights[c] * row[c].value_or(0.0);
  return z;
}

LinearModel train_classifier(const FeatureMatrix& train, const TrainMeta& meta) {
  const auto groups = stats::binary_labels(train);
  const MatrixXd x = dense(train);
  VectorXd y(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) y[i] = groups.is_first[i] ? 1.0 : -1.0;

  LogisticObjective obj{x, y, meta.c};
  VectorXd w = VectorXd::Zero(x.cols());
  double b = 0.0;
  double loss = obj.loss(w, b);
  double step = 1.0;
  int it = 0;
  for (; it < meta.max_iters; ++it) {
    VectorXd gw;
    double gb;
    obj.gradient(w, b, gw, gb);
    const double g2 = gw.squaredNorm() + gb * gb;
    if (g2 == 0.0) break;
    // Armijo backtracking from a step slightly larger than the last one.
    step = std::min(step * 2.0, 1e6);
    double next = 0;
    while (true) {
      next = obj.loss(w - step * gw, b - step * gb);
      if (next <= loss - 1e-4 * step * g2 || step < 1e-14) break;
      step *= 0.5;
    }
    w -= step * gw;
    b -= step * gb;
    const double rel = std::abs(loss - next) / std::max(std::abs(loss), 1e-12);
    loss = next;
    if (rel < meta.tolerance) {
      ++it;
      break;
    }
  }

  LinearModel model;
  model.kind = ModelKind::Classifier;
  model.feature_names = train.feature_names;
  model.weights.assign(w.data(), w.data() + w.size());
  model.bias = b;
  model.meta = meta;
  model.positive_label = groups.first;
  model.negative_label = groups.second;
  model.iterations = it;
  return model;
}

LinearModel train_regressor(const FeatureMatrix& train, const std::vector<double>& targets,
                            const TrainMeta& meta) {
  if (targets.size() != train.size()) {
    throw Error(ErrorKind::DimensionMismatch, "target count differs from row count");
  }
  if (train.size() == 0) throw Error(ErrorKind::EmptyInput, "no training rows");
  if (!(meta.c > 0)) throw Error(ErrorKind::Precondition, "c must be positive");
  const double lambda = 1.0 / meta.c;
  MatrixXd x = dense(train);
  VectorXd y = Eigen::Map<const VectorXd>(targets.data(), targets.size());
  // Centering removes the unpenalized bias from the solve.
  const Eigen::RowVectorXd x_mean = x.colwise().mean();
  const double y_mean = y.mean();
  x.rowwise() -= x_mean;
  y.array() -= y_mean;

  VectorXd w;
  if (x.cols() <= x.rows()) {
    MatrixXd a = x.transpose() * x;
    a.diagonal().array() += lambda;
    w = a.ldlt().solve(x.transpose() * y);
  } else {
    MatrixXd k = x * x.transpose();
    k.diagonal().array() += lambda;
    w = x.transpose() * k.ldlt().solve(y);
  }

  LinearModel model;
  model.kind = ModelKind::Regressor;
  model.feature_names = train.feature_names;
  model.weights.assign(w.data(), w.data() + w.size());
  model.bias = y_mean - x_mean.dot(w);
  model.meta = meta;
  return model;
}

std::vector<std::string> predict_labels(const LinearModel& model, const FeatureMatrix& m) {
  if (model.kind != ModelKind::Classifier) {
    throw Error(ErrorKind::Precondition, "label prediction needs a classifier");
  }
  std::vector<std::string> out;
  out.reserve(m.size());
  for (const auto& r : m.rows)
    out.push_back(model.decision(r.values) > 0 ? model.positive_label
                                               : model.negative_label);
  return out;
}

std::vector<double> predict_values(const LinearModel& model, const FeatureMatrix& m) {
  std::vector<double> out;
  out.reserve(m.size());
  for (const auto& r : m.rows) out.push_back(model.decision(r.values));
  return out;
}

int round_score(double v) { return static_cast<int>(std::lround(v)); }

std::vector<double> numeric_labels(const FeatureMatrix& m) {
  std::vector<double> out;
  for (const auto& r : m.rows) {
    if (!r.label || r.label->empty()) {
      throw Error(ErrorKind::MalformedRow, "row '" + r.sample_id + "' has no score");
    }
    out.push_back(io::parse_double(*r.label, "score of '" + r.sample_id + "'"));
  }
  return out;
}

std::vector<std::string> string_labels(const FeatureMatrix& m) {
  std::vector<std::string> out;
  for (const auto& r : m.rows) out.push_back(r.label.value_or(""));
  return out;
}

double c_rate(const std::vector<std::string>& pred, const std::vector<std::string>& truth) {
  if (pred.size() != truth.size()) {
    throw Error(ErrorKind::DimensionMismatch, "prediction and truth lengths differ");
  }
  if (truth.empty()) throw Error(ErrorKind::EmptyInput, "no predictions");
  std::size_t ok = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) ok += pred[i] == truth[i];
  return static_cast<double>(ok) / static_cast<double>(truth.size());
}

double uar(const std::vector<std::string>& pred, const std::vector<std::string>& truth) {
  if (pred.size() != truth.size()) {
    throw Error(ErrorKind::DimensionMismatch, "prediction and truth lengths differ");
  }
  if (truth.empty()) throw Error(ErrorKind::EmptyInput, "no predictions");
  std::map<std::string, std::pair<double, double>> per;  // class -> (hits, total)
  for (std::size_t i = 0; i < truth.size(); ++i) {
    auto& [hit, total] = per[truth[i]];
    total += 1;
    hit += pred[i] == truth[i];
  }
  double sum = 0;
  for (const auto& [_, ht] : per) sum += ht.first / ht.second;
  return sum / static_cast<double>(per.size());
}

double rmse(const std::vector<double>& pred, const std::vector<double>& truth) {
  if (pred.size() != truth.size()) {
    throw Error(ErrorKind::DimensionMismatch, "prediction and truth lengths differ");
  }
  if (truth.empty()) throw Error(ErrorKind::EmptyInput, "no predictions");
  double ss = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) ss += (pred[i] - truth[i]) * (pred[i] - truth[i]);
  return std::sqrt(ss / static_cast<double>(pred.size()));
}

CvResult cross_validate_classifier(const FeatureMatrix& m, const SplitSpec& spec,
                                   const TrainMeta& meta, const CvOptions& opts) {
  const auto labels = string_labels(m);
  const auto folds = kfold_indices(labels, spec, true);
  CvResult out;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    Indices train;
    for (std::size_t g = 0; g < folds.size(); ++g)
      if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
    std::sort(train.begin(), train.end());
    auto [tr, test] = fold_data(m, train, folds[f], opts.standardize);
    const auto model = train_classifier(tr, meta);
    out.per_fold.push_back(accuracy(predict_labels(model, test), string_labels(test)));
  }
  out.mean = std::accumulate(out.per_fold.begin(), out.per_fold.end(), 0.0) /
             static_cast<double>(out.per_fold.size());
  return out;
}

CvResult cross_validate_regressor(const FeatureMatrix& m, const SplitSpec& spec,
                                  const TrainMeta& meta, const CvOptions& opts) {
  const auto targets = numeric_labels(m);
  const auto folds = kfold_indices(string_labels(m), spec, false);
  CvResult out;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    Indices train;
    for (std::size_t g = 0; g < folds.size(); ++g)
      if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
    std::sort(train.begin(), train.end());
    std::vector<double> ty, sy;
    for (auto i : train) ty.push_back(targets[i]);
    for (auto i : folds[f]) sy.push_back(targets[i]);
    auto [tr, te] = fold_data(m, train, folds[f], opts.standardize);
    const auto model = train_regressor(tr, ty, meta);
    auto pred = predict_values(model, te);
    if (opts.round_predictions)
      for (auto& p : pred) p = round_score(p);
    out.per_fold.push_back(rmse(pred, sy));
  }
  out.mean = std::accumulate(out.per_fold.begin(), out.per_fold.end(), 0.0) /
             static_cast<double>(out.per_fold.size());
  return out;
}

std::string write_model(const LinearModel& model) {
  nlohmann::ordered_json j;
  j["kind"] = model.kind == ModelKind::Classifier ? "classifier" : "regressor";
  j["c"] = model.meta.c;
  j["tolerance"] = model.meta.tolerance;
  j["max_iters"] = model.meta.max_iters;
  j["iterations"] = model.iterations;
  j["seed"] = model.seed;
  j["train_fraction"] = model.train_fraction;
  j["folds"] = model.folds;
  if (model.kind == ModelKind::Classifier) {
    j["positive_label"] = model.positive_label;
    j["negative_label"] = model.negative_label;
  }
  j["bias"] = model.bias;
  auto feats = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < model.weights.size(); ++c) {
    nlohmann::ordered_json f;
    f["name"] = model.feature_names.at(c);
    f["weight"] = model.weights[c];
    if (model.zscore) {
      f["mean"] = model.zscore->mean.at(c);
      f["sd"] = model.zscore->sd.at(c);
    }
    feats.push_back(std::move(f));
  }
  j["features"] = std::move(feats);
  return j.dump(2) + "\n";
}

LinearModel parse_model_text(std::string_view text) {
  LinearModel m;
  try {
    const auto j = nlohmann::json::parse(text);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind != "classifier" && kind != "regressor") {
      throw Error(ErrorKind::MalformedRow, "unknown model kind '" + kind + "'");
    }
    m.kind = kind == "classifier" ? ModelKind::Classifier : ModelKind::Regressor;
    m.meta.c = j.at("c").get<double>();
    m.meta.tolerance = j.at("tolerance").get<double>();
    m.meta.max_iters = j.at("max_iters").get<int>();
    m.iterations = j.value("iterations", 0);
    m.seed = j.value("seed", std::uint64_t{0});
    m.train_fraction = j.value("train_fraction", 0.7);
    m.folds = j.value("folds", 5);
    m.positive_label = j.value("positive_label", "");
    m.negative_label = j.value("negative_label", "");
    m.bias = j.at("bias").get<double>();
    bool has_z = false;
    stats::ZScoreStats z;
    for (const auto& f : j.at("features")) {
      m.feature_names.push_back(f.at("name").get<std::string>());
      m.weights.push_back(f.at("weight").get<double>());
      if (f.contains("mean")) {
        has_z = true;
        z.mean.push_back(f.at("mean").get<double>());
        z.sd.push_back(f.at("sd").get<double>());
      }
    }
    if (has_z) {
      if (z.mean.size() != m.weights.size()) {
        throw Error(ErrorKind::MalformedRow, "z-score stats missing for some features");
      }
      m.zscore = std::move(z);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedRow, std::string("model file: ") + e.what());
  }
  return m;
}

LinearModel read_model(const std::filesystem::path& path) {
  return parse_model_text(io::read_file(path));
}

}  // namespace readlens::learn
