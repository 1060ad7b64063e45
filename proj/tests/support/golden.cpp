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

#include "golden.hpp"

#include <map>
#include <utility>

namespace readlens::testing {

std::filesystem::path golden_dir() { return std::filesystem::path(READLENS_TEST_DATA) / "golden"; }

double table_similarity(const std::string& a, const std::string& b) {
  static const std::map<std::pair<std::string, std::string>, double> table = {
      {{"presently", "initially"}, 0.78}, {{"monday", "say"}, 0.45},
      {{"morning", "horse"}, 0.57},       {{"saddle", "horse"}, 0.65},
      {{"back", "horse"}, 0.39},          {{"o", "work"}, 0.24},
      {{"out", "work"}, 0.02},            {{"like", "come"}, 0.38},
      {{"animal", "horse"}, 0.54},
  };
  if (a == b) return 1.0;
  if (auto it = table.find({a, b}); it != table.end()) return it->second;
  if (auto it = table.find({b, a}); it != table.end()) return it->second;
  return 0.0;
}

const std::vector<ScoredPair>& levenshtein_table() {
  static const std::vector<ScoredPair> rows = {
      {"presently", "initially", 0.22}, {"horse", "horse", 1.0}, {"come", "come", 1.0},
      {"camel", "camel", 1.0},          {"monday", "say", 0.33}, {"morning", "horse", 0.29},
      {"saddle", "horse", 0.17},        {"back", "horse", 0.0},  {"say", "say", 1.0},
      {"o", "work", 0.25},              {"out", "work", 0.25},   {"work", "work", 1.0},
      {"like", "come", 0.25},           {"animal", "horse", 0.0},
  };
  return rows;
}

}  // namespace readlens::testing
