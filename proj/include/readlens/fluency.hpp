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

// Temporal fluency of a spoken response.
//
// Silences shorter than the pause threshold count as speaking time, so
// TRT = ST + SPT + FPT always holds. A run is the speech between two counted
// silent pauses; filled pauses do not end a run.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "readlens/types.hpp"

namespace readlens::fluency {

struct FluencyFeatures {
  double TRT = 0, ST = 0, SPT = 0, FPT = 0;
  std::optional<double> MSP, MFP;
  double STR = 0, SPR = 0, FPR = 0;
  int NumSyl = 0, NumSP = 0, NumFP = 0;
  double SR = 0, AR = 0, MSR = 0;
  int runs = 0;
};

inline constexpr std::array<const char*, 15> kFeatureNames = {
    "TRT", "ST", "SPT", "FPT", "MSP", "MFP", "STR", "SPR",
    "FPR", "NumSyl", "NumSP", "NumFP", "SR", "AR", "MSR"};

FluencyFeatures fluency_features(const TranscriptTimeline& timeline,
                                 double min_silent_pause_s = 0.25);

// Values in kFeatureNames order.
std::vector<std::optional<double>> as_row(const FluencyFeatures& f);

}  // namespace readlens::fluency
