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

#include "readlens/fluency.hpp"

#include "readlens/error.hpp"

namespace readlens::fluency {

namespace {

// Interval durations come from subtracting decimal timestamps, so 0.25 can
// arrive as 0.24999999999999997.
constexpr double kBoundarySlack = 1e-9;

}  // namespace

FluencyFeatures fluency_features(const TranscriptTimeline& timeline,
                                 double min_silent_pause_s) {
  if (!(min_silent_pause_s > 0)) {
    throw Error(ErrorKind::Precondition, "pause threshold must be positive");
  }
  FluencyFeatures f;
  bool any_speech = false;
  bool run_has_speech = false;
  for (const auto& iv : timeline.intervals) {
    const double d = iv.duration();
    switch (iv.kind) {
      case IntervalKind::Boundary:
        break;
      case IntervalKind::Speech:
        any_speech = true;
        run_has_speech = true;
        f.ST += d;
        f.NumSyl += iv.syllables;
        break;
      case IntervalKind::FilledPause:
        f.FPT += d;
        ++f.NumFP;
        break;
      case IntervalKind::SilentPause:
        if (d >= min_silent_pause_s - kBoundarySlack) {
          f.SPT += d;
          ++f.NumSP;
          if (run_has_speech) ++f.runs;
          run_has_speech = false;
        } else {
          f.ST += d;
        }
        break;
    }
  }
  if (!any_speech) throw Error(ErrorKind::NoSpeech, "timeline has no speech interval");
  if (run_has_speech) ++f.runs;

  f.TRT = f.ST + f.SPT + f.FPT;
  f.STR = f.ST / f.TRT;
  f.SPR = f.SPT / f.TRT;
  f.FPR = f.FPT / f.TRT;
  f.SR = f.NumSyl / f.TRT * 60.0;
  f.AR = f.NumSyl / (f.ST + f.FPT) * 60.0;
  f.MSR = static_cast<double>(f.NumSyl) / f.runs;
  if (f.NumSP > 0) f.MSP = f.SPT / f.NumSP;
  if (f.NumFP > 0) f.MFP = f.FPT / f.NumFP;
  return f;
}

std::vector<std::optional<double>> as_row(const FluencyFeatures& f) {
  return {f.TRT, f.ST,     f.SPT,   f.FPT,   f.MSP, f.MFP, f.STR, f.SPR,
          f.FPR, f.NumSyl, f.NumSP, f.NumFP, f.SR,  f.AR,  f.MSR};
}

}  // namespace readlens::fluency
