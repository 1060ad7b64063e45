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

#include "readlens/error.hpp"

#include "readlens/types.hpp"

namespace readlens {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::UnsortedEvents: return "UnsortedEvents";
    case ErrorKind::CoverageGap: return "CoverageGap";
    case ErrorKind::OverlapError: return "OverlapError";
    case ErrorKind::BadHead: return "BadHead";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NoLayout: return "NoLayout";
    case ErrorKind::LayoutMismatch: return "LayoutMismatch";
    case ErrorKind::DegenerateVariance: return "DegenerateVariance";
    case ErrorKind::ConstantInput: return "ConstantInput";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::NonBinaryLabels: return "NonBinaryLabels";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::NoSpeech: return "NoSpeech";
    case ErrorKind::MissingResource: return "MissingResource";
    case ErrorKind::EmptyReference: return "EmptyReference";
    case ErrorKind::NoAlignment: return "NoAlignment";
    case ErrorKind::Precondition: return "Precondition";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

const char* level_name(AoiLevel level) {
  switch (level) {
    case AoiLevel::Word: return "word";
    case AoiLevel::SubSentence: return "sub_sentence";
    case AoiLevel::Sentence: return "sentence";
    case AoiLevel::Paragraph: return "paragraph";
    case AoiLevel::Slide: return "slide";
    case AoiLevel::WholeText: return "whole_text";
  }
  return "?";
}

const char* factor_name(RatingFactor factor) {
  switch (factor) {
    case RatingFactor::WordFrequency: return "word_frequency";
    case RatingFactor::AgeOfAcquisition: return "age_of_acquisition";
    case RatingFactor::Familiarity: return "familiarity";
    case RatingFactor::Imagery: return "imagery";
    case RatingFactor::Concreteness: return "concreteness";
    case RatingFactor::Emotion: return "emotion";
  }
  return "?";
}

int AoiLayout::span_of(AoiLevel level, int w) const {
  const auto& s = level_spans(level);
  // Spans are sorted and disjoint.
  int lo = 0;
  int hi = static_cast<int>(s.size()) - 1;
  while (lo <= hi) {
    int mid = (lo + hi) / 2;
    if (w < s[mid].first) {
      hi = mid - 1;
    } else if (w > s[mid].last) {
      lo = mid + 1;
    } else {
      return mid;
    }
  }
  return -1;
}

}  // namespace readlens
