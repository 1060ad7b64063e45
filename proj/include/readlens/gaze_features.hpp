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

// Fixation, saccade and regression features per area of interest.
//
// A visit to an AoI is a maximal run of consecutive fixations inside it.
// FFD and SFD are the durations of the first fixation of visits 1 and 2;
// LFD sums every fixation of visits 3 and later.
//
// Word AoIs carry the 7 fixation features only. Every other AoI carries
// 7 fixation + 7 saccade + 8 regression features, so a layout with W words
// and A higher-level spans yields W*7 + A*22 columns.

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "readlens/feature_matrix.hpp"
#include "readlens/gaze_clean.hpp"
#include "readlens/types.hpp"

namespace readlens::gaze {

struct FixationFeatures {
  double tFD = 0, FFD = 0, SFD = 0, LFD = 0, aFD = 0, tFC = 0, aFC = 0;
  bool operator==(const FixationFeatures&) const = default;
};

struct SaccadeFeatures {
  double SD = 0, SC = 0, SV = 0, SpV = 0, rS = 0, sS = 0, SA = 0;
  bool operator==(const SaccadeFeatures&) const = default;
};

struct RegressionFeatures {
  double RD = 0, RC = 0, RV = 0, RpV = 0, rR = 0, sR = 0, RA = 0;
  std::optional<double> rSR;  // missing when RC == 0
  bool operator==(const RegressionFeatures&) const = default;
};

inline constexpr std::array<const char*, 7> kFixationNames = {
    "tFD", "FFD", "SFD", "LFD", "aFD", "tFC", "aFC"};
inline constexpr std::array<const char*, 7> kSaccadeNames = {
    "SD", "SC", "SV", "SpV", "rS", "sS", "SA"};
inline constexpr std::array<const char*, 8> kRegressionNames = {
    "RD", "RC", "RV", "RpV", "rR", "sR", "RA", "rSR"};

enum class Direction { Forward, Regression };

struct SaccadeClassified {
  GazeEvent event;
  int launch_word = 0;
  int landing_word = 0;
  Direction direction = Direction::Forward;
  double amplitude_px = 0.0;
};

// Pairs each saccade with the fixations immediately before and after it in
// the cleaned event stream; saccades without a fixation on both sides are
// dropped.
std::vector<SaccadeClassified> classify_saccades(const CleanedTrace& cleaned);

// Durations grouped by visit, visits in temporal order.
FixationFeatures fixation_features_of_visits(
    const std::vector<std::vector<double>>& visits);
FixationFeatures fixation_features(std::span<const AlignedFixation> fixations,
                                   Span aoi);
SaccadeFeatures saccade_features(Span aoi,
                                 std::span<const SaccadeClassified> saccades);
RegressionFeatures regression_features(Span aoi,
                                       std::span<const SaccadeClassified> saccades,
                                       double saccade_count_of_aoi);

// Word-level fixation features for every word of the layout, in word order.
std::vector<FixationFeatures> word_fixation_features(const CleanedTrace& cleaned,
                                                     const AoiLayout& layout);

std::size_t feature_column_count(const AoiLayout& layout);
std::vector<std::string> feature_column_names(const AoiLayout& layout);

// One unimputed row (rSR may be missing) for a cleaned trace.
std::vector<Cell> trace_feature_row(const CleanedTrace& cleaned,
                                    const AoiLayout& layout);

std::string sample_id(const GazeTrace& trace);

// Rows in input order; missing rSR cells are filled with the column mean of
// the present values (0 when the whole column is missing).
FeatureMatrix build_matrix(const std::vector<CleanedTrace>& traces,
                           const AoiLayout& layout);

// Per text element (setting, plot, ...) and (day, label) group: mean and
// population SD of the 22 AoI features across traces.
struct ElementAggregate {
  std::string element;
  int day = 0;
  std::string label;
  std::string feature;
  double mean = 0.0;
  double sd = 0.0;
  int n = 0;
};
std::vector<ElementAggregate> aggregate_by_element(
    const std::vector<CleanedTrace>& traces, const AoiLayout& layout);
std::string write_element_csv(const std::vector<ElementAggregate>& rows);

}  // namespace readlens::gaze
