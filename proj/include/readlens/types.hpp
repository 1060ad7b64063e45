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

// Shared domain types produced by corpus_io and consumed by every pipeline.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace readlens {

enum class EventKind { Fixation, Saccade, Blink };
enum class Eye { Left, Right };

struct GazeEvent {
  EventKind kind = EventKind::Fixation;
  Eye eye = Eye::Left;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::int64_t duration_ms = 0;
  double x = 0.0;
  double y = 0.0;
  int slide = 0;
  std::optional<double> pupil;          // fixations only
  std::optional<double> avg_velocity;   // saccades only
  std::optional<double> peak_velocity;  // saccades only
  std::optional<double> end_x;          // saccades only
  std::optional<double> end_y;          // saccades only

  bool operator==(const GazeEvent&) const = default;
};

enum class ReadingLabel { High, Low };

struct GazeTrace {
  std::string participant_id;
  int session = 1;
  int day = 1;
  std::optional<ReadingLabel> label;
  std::vector<GazeEvent> events;

  bool operator==(const GazeTrace&) const = default;
};

// Areas of interest, finest to coarsest. Word and whole-text spans are
// implied by the word list; the middle four come from the layout file.
enum class AoiLevel { Word, SubSentence, Sentence, Paragraph, Slide, WholeText };
inline constexpr std::array<AoiLevel, 6> kAllLevels = {
    AoiLevel::Word,      AoiLevel::SubSentence, AoiLevel::Sentence,
    AoiLevel::Paragraph, AoiLevel::Slide,       AoiLevel::WholeText};

const char* level_name(AoiLevel level);

struct WordBox {
  int index = 0;  // reading order, 0..N-1
  std::string text;
  int slide = 0;
  int line = 0;  // index into the slide's line list
  double x_min = 0.0;
  double x_max = 0.0;

  bool operator==(const WordBox&) const = default;
};

// Inclusive range of word indices.
struct Span {
  int first = 0;
  int last = 0;

  int size() const { return last - first + 1; }
  bool contains(int w) const { return w >= first && w <= last; }
  bool operator==(const Span&) const = default;
};

struct AoiLayout {
  // line_y[slide][line] is the y-center of that text line.
  std::vector<std::vector<double>> line_y;
  std::vector<WordBox> words;  // sorted by index
  std::array<std::vector<Span>, 6> spans;
  // Optional story-structure sections (setting, plot, ...), in file order.
  std::vector<std::pair<std::string, Span>> elements;

  const std::vector<Span>& level_spans(AoiLevel level) const {
    return spans[static_cast<std::size_t>(level)];
  }
  int word_count() const { return static_cast<int>(words.size()); }
  // Index of the span at `level` containing word w.
  int span_of(AoiLevel level, int w) const;

  bool operator==(const AoiLayout&) const = default;
};

enum class RatingFactor {
  WordFrequency,
  AgeOfAcquisition,
  Familiarity,
  Imagery,
  Concreteness,
  Emotion
};
inline constexpr std::array<RatingFactor, 6> kAllFactors = {
    RatingFactor::WordFrequency, RatingFactor::AgeOfAcquisition,
    RatingFactor::Familiarity,   RatingFactor::Imagery,
    RatingFactor::Concreteness,  RatingFactor::Emotion};

const char* factor_name(RatingFactor factor);

struct RatingLexicon {
  RatingFactor factor = RatingFactor::WordFrequency;
  int scale_points = 7;
  std::unordered_map<std::string, int> entries;

  std::optional<int> rating(const std::string& lemma) const {
    auto it = entries.find(lemma);
    if (it == entries.end()) return std::nullopt;
    return it->second;
  }
};

struct EmbeddingTable {
  int dimension = 0;
  std::unordered_map<std::string, std::vector<double>> vectors;

  const std::vector<double>* find(const std::string& token) const {
    auto it = vectors.find(token);
    return it == vectors.end() ? nullptr : &it->second;
  }
};

struct TokenQuartet {
  std::string form;
  std::string lemma;
  std::string pos;
  std::string dep_rel;
  int dep_dist = 0;

  bool operator==(const TokenQuartet&) const = default;
};

struct ParsedSentence {
  std::vector<TokenQuartet> tokens;

  bool operator==(const ParsedSentence&) const = default;
};

enum class IntervalKind { Speech, SilentPause, FilledPause, Boundary };

struct TimelineInterval {
  double start_s = 0.0;
  double end_s = 0.0;
  IntervalKind kind = IntervalKind::Speech;
  int syllables = 0;

  double duration() const { return end_s - start_s; }
  bool operator==(const TimelineInterval&) const = default;
};

struct TranscriptTimeline {
  std::vector<TimelineInterval> intervals;

  bool operator==(const TranscriptTimeline&) const = default;
};

}  // namespace readlens
