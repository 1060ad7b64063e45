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

#include "readlens/feature_matrix.hpp"

#include <sstream>
#include <unordered_set>

#include "readlens/corpus_io.hpp"
#include "readlens/error.hpp"

namespace readlens {

bool FeatureMatrix::all_labeled() const {
  for (const auto& r : rows)
    if (!r.label || r.label->empty()) return false;
  return !rows.empty();
}

void FeatureMatrix::validate() const {
  std::unordered_set<std::string> seen;
  for (const auto& n : feature_names) {
    if (!seen.insert(n).second) {
      throw Error(ErrorKind::MalformedRow, "duplicate feature name '" + n + "'");
    }
  }
  for (const auto& r : rows) {
    if (r.values.size() != feature_names.size()) {
      throw Error(ErrorKind::MalformedRow,
                  "row '" + r.sample_id + "' has " + std::to_string(r.values.size()) +
                      " values for " + std::to_string(feature_names.size()) +
                      " features");
    }
  }
}

FeatureMatrix FeatureMatrix::select_columns(const std::vector<std::size_t>& cols) const {
  FeatureMatrix out;
  for (auto c : cols) out.feature_names.push_back(feature_names.at(c));
  out.rows.reserve(rows.size());
  for (const auto& r : rows) {
    Row nr{r.sample_id, r.label, {}};
    nr.values.reserve(cols.size());
    for (auto c : cols) nr.values.push_back(r.values.at(c));
    out.rows.push_back(std::move(nr));
  }
  return out;
}

FeatureMatrix FeatureMatrix::select_rows(const std::vector<std::size_t>& idx) const {
  FeatureMatrix out;
  out.feature_names = feature_names;
  for (auto i : idx) out.rows.push_back(rows.at(i));
  return out;
}

std::string write_matrix_csv(const FeatureMatrix& m) {
  std::ostringstream out;
  out << "sample_id,label";
  for (const auto& n : m.feature_names) out << ',' << n;
  out << '\n';
  for (const auto& r : m.rows) {
    out << r.sample_id << ',' << r.label.value_or("");
    for (const auto& v : r.values) {
      out << ',';
      if (v) out << io::format_double(*v);
    }
    out << '\n';
  }
  return out.str();
}

FeatureMatrix parse_matrix_csv_text(std::string_view text) {
  FeatureMatrix m;
  bool header = false;
  std::size_t line_no = 0;
  for (const auto& raw : io::split(text, '\n')) {
    ++line_no;
    std::string_view line = io::trim(raw);
    if (line.empty()) continue;
    auto fields = io::split(line, ',');
    if (!header) {
      if (fields.size() < 2 || io::trim(fields[0]) != "sample_id" ||
          io::trim(fields[1]) != "label") {
        throw Error(ErrorKind::MalformedRow,
                    "matrix CSV header must start with sample_id,label");
      }
      for (std::size_t i = 2; i < fields.size(); ++i)
        m.feature_names.emplace_back(io::trim(fields[i]));
      header = true;
      continue;
    }
    if (fields.size() != m.feature_names.size() + 2) {
      throw Error(ErrorKind::MalformedRow,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(m.feature_names.size() + 2) + " fields");
    }
    FeatureMatrix::Row r;
    r.sample_id = std::string(io::trim(fields[0]));
    std::string_view label = io::trim(fields[1]);
    if (!label.empty()) r.label = std::string(label);
    r.values.reserve(m.feature_names.size());
    for (std::size_t i = 2; i < fields.size(); ++i) {
      std::string_view cell = io::trim(fields[i]);
      if (cell.empty()) {
        r.values.emplace_back();
      } else {
        r.values.emplace_back(io::parse_double(cell, "line " + std::to_string(line_no)));
      }
    }
    m.rows.push_back(std::move(r));
  }
  if (!header) throw Error(ErrorKind::EmptyInput, "matrix CSV is empty");
  m.validate();
  return m;
}

FeatureMatrix read_matrix_csv(const std::filesystem::path& path) {
  return parse_matrix_csv_text(io::read_file(path));
}

}  // namespace readlens
