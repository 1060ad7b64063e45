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

// Global (Needleman-Wunsch) alignment score of two symbol sequences.

#pragma once

#include <algorithm>
#include <span>
#include <vector>

namespace readlens {

struct AlignScores {
  double match = 2.0;
  double mismatch = -1.0;
  double gap = -0.5;
};

template <typename T>
double needleman_wunsch(std::span<const T> a, std::span<const T> b,
                        const AlignScores& s = {}) {
  // Two rolling rows of the (|a|+1) x (|b|+1) score table.
  std::vector<double> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = s.gap * static_cast<double>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = s.gap * static_cast<double>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const double diag = prev[j - 1] + (a[i - 1] == b[j - 1] ? s.match : s.mismatch);
      cur[j] = std::max({diag, prev[j] + s.gap, cur[j - 1] + s.gap});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

template <typename T>
double needleman_wunsch(const std::vector<T>& a, const std::vector<T>& b,
                        const AlignScores& s = {}) {
  return needleman_wunsch(std::span<const T>(a), std::span<const T>(b), s);
}

}  // namespace readlens
