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

#include <cmath>
#include <exception>
#include <mutex>

#include <omp.h>

#include "readlens/error.hpp"
#include "readlens/gaze_features.hpp"

namespace readlens::kernels {

namespace {

// Exceptions must not escape an OpenMP region; keep the first one and
// rethrow after the loop. "First" means lowest index, so the error reported
// does not depend on scheduling.
class FirstError {
 public:
  void capture(std::ptrdiff_t i) {
    std::lock_guard lock(mu_);
    if (!err_ || i < index_) {
      err_ = std::current_exception();
      index_ = i;
    }
  }
  void rethrow() const {
    if (err_) std::rethrow_exception(err_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr err_;
  std::ptrdiff_t index_ = 0;
};

void moments_of_column(const FeatureMatrix& m, std::size_t c, double& mean, double& sd) {
  double sum = 0;
  std::size_t n = 0;
  for (const auto& r : m.rows) {
    if (r.values[c]) {
      sum += *r.values[c];
      ++n;
    }
  }
  if (n == 0) {
    mean = 0;
    sd = 0;
    return;
  }
  mean = sum / static_cast<double>(n);
  double ss = 0;
  for (const auto& r : m.rows)
    if (r.values[c]) ss += (*r.values[c] - mean) * (*r.values[c] - mean);
  sd = std::sqrt(ss / static_cast<double>(n));
}

void standardize_row(FeatureMatrix::Row& r, const stats::ZScoreStats& s) {
  for (std::size_t c = 0; c < r.values.size(); ++c) {
    auto& v = r.values[c];
    if (!v) continue;
    v = s.sd[c] > 0 ? (*v - s.mean[c]) / s.sd[c] : 0.0;
  }
}

std::optional<double> pvalue_of_column(const FeatureMatrix& m,
                                       const std::vector<bool>& in_first,
                                       std::size_t c) {
  std::vector<double> a, b;
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    const auto& v = m.rows[i].values[c];
    if (!v) continue;
    (in_first[i] ? a : b).push_back(*v);
  }
  if (a.size() < 2 || b.size() < 2) return std::nullopt;
  try {
    return stats::welch_t(a, b).p;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DegenerateVariance) return std::nullopt;
    throw;
  }
}

void check_groups(const FeatureMatrix& m, const std::vector<bool>& in_first) {
  if (in_first.size() != m.rows.size()) {
    throw Error(ErrorKind::DimensionMismatch, "group mask length differs from row count");
  }
}

}  // namespace

int max_threads() { return omp_get_max_threads(); }

std::vector<std::vector<Cell>> feature_rows(const std::vector<gaze::CleanedTrace>& traces,
                                            const AoiLayout& layout) {
  std::vector<std::vector<Cell>> rows(traces.size());
  FirstError err;
  const auto n = static_cast<std::ptrdiff_t>(traces.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      rows[i] = gaze::trace_feature_row(traces[i], layout);
    } catch (...) {
      err.capture(i);
    }
  }
  err.rethrow();
  return rows;
}

std::vector<std::vector<Cell>> feature_rows_serial(
    const std::vector<gaze::CleanedTrace>& traces, const AoiLayout& layout) {
  std::vector<std::vector<Cell>> rows;
  rows.reserve(traces.size());
  for (const auto& t : traces) rows.push_back(gaze::trace_feature_row(t, layout));
  return rows;
}

stats::ZScoreStats column_moments(const FeatureMatrix& m) {
  stats::ZScoreStats s;
  s.mean.resize(m.cols());
  s.sd.resize(m.cols());
  const auto n = static_cast<std::ptrdiff_t>(m.cols());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < n; ++c) moments_of_column(m, c, s.mean[c], s.sd[c]);
  return s;
}

stats::ZScoreStats column_moments_serial(const FeatureMatrix& m) {
  stats::ZScoreStats s;
  s.mean.resize(m.cols());
  s.sd.resize(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) moments_of_column(m, c, s.mean[c], s.sd[c]);
  return s;
}

void standardize(FeatureMatrix& m, const stats::ZScoreStats& s) {
  const auto n = static_cast<std::ptrdiff_t>(m.rows.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) standardize_row(m.rows[i], s);
}

void standardize_serial(FeatureMatrix& m, const stats::ZScoreStats& s) {
  for (auto& r : m.rows) standardize_row(r, s);
}

std::vector<std::optional<double>> column_pvalues(const FeatureMatrix& m,
                                                  const std::vector<bool>& in_first) {
  check_groups(m, in_first);
  std::vector<std::optional<double>> p(m.cols());
  FirstError err;
  const auto n = static_cast<std::ptrdiff_t>(m.cols());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t c = 0; c < n; ++c) {
    try {
      p[c] = pvalue_of_column(m, in_first, c);
    } catch (...) {
      err.capture(c);
    }
  }
  err.rethrow();
  return p;
}

std::vector<std::optional<double>> column_pvalues_serial(
    const FeatureMatrix& m, const std::vector<bool>& in_first) {
  check_groups(m, in_first);
  std::vector<std::optional<double>> p(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) p[c] = pvalue_of_column(m, in_first, c);
  return p;
}

std::vector<double> pair_scores(const std::vector<std::string>& a,
                                const std::vector<std::string>& b,
                                const PairScorer& scorer) {
  std::vector<double> out(a.size() * b.size());
  FirstError err;
  const auto n = static_cast<std::ptrdiff_t>(out.size());
  const std::size_t cols = b.size();
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    try {
      out[k] = scorer(a[k / cols], b[k % cols]);
    } catch (...) {
      err.capture(k);
    }
  }
  err.rethrow();
  return out;
}

std::vector<double> pair_scores_serial(const std::vector<std::string>& a,
                                       const std::vector<std::string>& b,
                                       const PairScorer& scorer) {
  std::vector<double> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(scorer(x, y));
  return out;
}

}  // namespace readlens::kernels
