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

// Gaze noise removal and fixation-to-text alignment.
//
// The pipeline runs in this order:
//   1. drop_blinks
//   2. filter_durations        (fixations outside [min_fix_ms, max_fix_ms])
//   3. snap_to_lines           (nearest line, then word on that line)
//   4. smooth_line_outliers and remove_isolated, repeated until stable
//   5. apply_overrides         (manual corrections, optional)
//
// Step 4 is repeated because removing an isolated fixation can create a new
// lone line outlier and vice versa; both steps strictly reduce a finite
// measure so the loop terminates, and the result is a fixed point of the
// whole pipeline.

#pragma once

#include <filesystem>
#include <map>
#include <string_view>
#include <vector>

#include "readlens/types.hpp"

namespace readlens::gaze {

struct CleanParams {
  int min_fix_ms = 50;
  int max_fix_ms = 1000;
  int isolation_gap_words = 2;
  bool smoothing_enabled = true;

  void validate() const;
};

struct AlignedFixation {
  GazeEvent event;
  int word_index = 0;
  int line = 0;
  int slide = 0;
  int visit_ordinal = 1;

  bool operator==(const AlignedFixation&) const = default;
};

struct CleanedTrace {
  // Remaining events, with each fixation's y moved to its line's y.
  GazeTrace trace;
  // One entry per fixation in `trace`, same order.
  std::vector<AlignedFixation> fixations;

  bool operator==(const CleanedTrace&) const = default;
};

// Manual corrections: 1-based fixation ordinal -> word index.
using Overrides = std::map<int, int>;

GazeTrace drop_blinks(const GazeTrace& trace);
GazeTrace filter_durations(const GazeTrace& trace, const CleanParams& params);

std::vector<AlignedFixation> snap_to_lines(const GazeTrace& trace,
                                           const AoiLayout& layout);

// One left-to-right pass: a fixation whose line differs from both neighbours
// while the neighbours agree moves to their line and is re-snapped to the
// nearest word there.
std::vector<AlignedFixation> smooth_line_outliers(
    const std::vector<AlignedFixation>& aligned, const AoiLayout& layout);

// Drops fixations that are at least `gap_words` away from every temporal
// neighbour and form a one-fixation visit.
std::vector<AlignedFixation> remove_isolated(
    const std::vector<AlignedFixation>& aligned, int gap_words);

void assign_visit_ordinals(std::vector<AlignedFixation>& aligned);

std::vector<AlignedFixation> apply_overrides(
    const std::vector<AlignedFixation>& aligned, const Overrides& overrides,
    const AoiLayout& layout);

CleanedTrace clean_trace(const GazeTrace& trace, const AoiLayout& layout,
                         const CleanParams& params,
                         const Overrides& overrides = {});

// Word on `line` of `slide` nearest to x: containing box first, otherwise
// smallest horizontal gap, ties to the smaller index.
int nearest_word_on_line(const AoiLayout& layout, int slide, int line, double x);

Overrides parse_overrides_text(std::string_view text);
Overrides parse_overrides(const std::filesystem::path& path);

}  // namespace readlens::gaze
