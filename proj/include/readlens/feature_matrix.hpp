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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace readlens {

using Cell = std::optional<double>;

// Labeled numeric matrix; rows are samples, columns named features.
// An empty optional marks a missing value.
struct FeatureMatrix {
  struct Row {
    std::string sample_id;
    std::optional<std::string> label;
    std::vector<Cell> values;

    bool operator==(const Row&) const = default;
  };

  std::vector<std::string> feature_names;
  std::vector<Row> rows;

  std::size_t cols() const { return feature_names.size(); }
  std::size_t size() const { return rows.size(); }
  bool all_labeled() const;

  // Throws if a row has the wrong width or names repeat.
  void validate() const;

  // Keeps only the given columns, in the given order.
  FeatureMatrix select_columns(const std::vector<std::size_t>& cols) const;
  FeatureMatrix select_rows(const std::vector<std::size_t>& rows) const;

  bool operator==(const FeatureMatrix&) const = default;
};

// CSV with header `sample_id,label,<features...>`; empty cells are missing.
std::string write_matrix_csv(const FeatureMatrix& m);
FeatureMatrix parse_matrix_csv_text(std::string_view text);
FeatureMatrix read_matrix_csv(const std::filesystem::path& path);

}  // namespace readlens
