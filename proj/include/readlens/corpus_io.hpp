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

// Readers and writers for every file format the toolkit consumes.
//
// Each parse_* function has a *_text twin that parses from an in-memory
// string; the path variants read the file and delegate. Parsers throw
// readlens::Error with the row or line number in the message.

#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "readlens/types.hpp"

namespace readlens::io {

std::string read_file(const std::filesystem::path& path);

// Gaze CSV. Required columns: kind,eye,start_ms,end_ms,x,y,pupil,avg_vel,
// peak_vel,end_x,end_y. An optional `slide` column places events on a
// slide (default 0); other columns are ignored. Leading `# key=value`
// comment lines carry participant, session, day and label.
GazeTrace parse_gaze_log_text(std::string_view text,
                              std::string default_participant = "");
GazeTrace parse_gaze_log(const std::filesystem::path& path);
std::string write_gaze_log(const GazeTrace& trace);

// AoI layout JSON: {"lines": [{"slide", "y"}], "words": [...],
// "spans": {"sub_sentence", "sentence", "paragraph", "slide"},
// optional "elements": {"setting": [first, last], ...}}.
AoiLayout parse_aoi_layout_text(std::string_view text);
AoiLayout parse_aoi_layout(const std::filesystem::path& path);
std::string write_aoi_layout(const AoiLayout& layout);

// CoNLL-U. dep_dist is |index - head|, 0 for the root token.
std::vector<ParsedSentence> parse_conllu_text(std::string_view text);
std::vector<ParsedSentence> parse_conllu(const std::filesystem::path& path);

// Whitespace-separated text vectors with an optional "count dim" header.
// Duplicate tokens: the last record wins and `warn` is called.
using WarningSink = std::function<void(const std::string&)>;
EmbeddingTable parse_embeddings_text(std::string_view text,
                                     const WarningSink& warn = {});
EmbeddingTable parse_embeddings(const std::filesystem::path& path,
                                const WarningSink& warn = {});

// Timeline TSV: start_s, end_s, kind in {speech,bp,lp,fp,$}, syllables.
// Leading and trailing non-speech intervals become Boundary.
TranscriptTimeline parse_timeline_text(std::string_view text);
TranscriptTimeline parse_timeline(const std::filesystem::path& path);
std::string write_timeline(const TranscriptTimeline& timeline);

// Praat long-format TextGrid with a label tier (speech/bp/lp/fp/$) and an
// optional second tier of per-interval syllable counts.
TranscriptTimeline parse_textgrid_text(std::string_view text);

// Maps v in [min, max] onto 1..scale_points, rounding half away from zero.
int rescale_rating(double v, double min, double max, int scale_points);

// Rating TSV: lemma<TAB>value. Raw values outside [min, max] are rejected.
RatingLexicon parse_rating_lexicon_text(std::string_view text,
                                        RatingFactor factor, int scale_points,
                                        double raw_min, double raw_max,
                                        const WarningSink& warn = {});
RatingLexicon parse_rating_lexicon(const std::filesystem::path& path,
                                   RatingFactor factor, int scale_points,
                                   double raw_min, double raw_max,
                                   const WarningSink& warn = {});

// Shared text helpers.
std::vector<std::string> split(std::string_view s, char delim);
std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
double parse_double(std::string_view s, const std::string& context);
std::int64_t parse_int(std::string_view s, const std::string& context);
// Shortest round-trip representation.
std::string format_double(double v);

}  // namespace readlens::io
