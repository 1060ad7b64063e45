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

// Readability indices, type-token variation and rating-bin profiles of a
// learner's text.

#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "readlens/types.hpp"

namespace readlens::lingfeat {

// Vowel groups (y counts as a vowel), minus a silent final e, minus a
// silent -ed / -es ending; at least 1. A few common words are listed
// explicitly.
int count_syllables(std::string_view word);

struct TextProfile {
  int words = 0;
  int sentences = 0;
  int syllables = 0;
  int complex_words = 0;  // 3 or more syllables
  int characters = 0;     // letters only
  std::optional<int> difficult_words;  // not on the easy-word list, when given
};

// Words are tokens containing at least one letter.
std::vector<std::string> words_of(std::string_view text);
TextProfile profile_text(std::string_view text,
                         const std::set<std::string>* easy_words = nullptr);

struct Readability {
  double fre = 0.0;
  double fog = 0.0;
  double smog = 0.0;
  double ari = 0.0;
  double coleman_liau = 0.0;
  std::optional<double> dale_chall;
};

// Throws Precondition when the profile has no sentence or no word, and
// MissingResource when Dale-Chall is required but no easy-word count exists.
Readability readability(const TextProfile& p, bool require_dale_chall = false);

struct TtrFamily {
  double ttr = 0.0;
  double rttr = 0.0;
  double cttr = 0.0;
  std::optional<double> log_ttr;   // N > 1
  std::optional<double> msttr50;   // N >= 50
  int ndw = 0;
  std::optional<double> uber;      // T < N
};

TtrFamily ttr_family(const std::vector<std::string>& tokens);

struct BinShares {
  double low = 0.0;
  double mid = 0.0;
  double high = 0.0;
};

// Per factor, the share (percent) of in-lexicon tokens rated 1-3, 4-6 and
// 7-9. Factors without any rated token are absent.
std::vector<std::pair<RatingFactor, std::optional<BinShares>>> rating_bin_profile(
    const std::vector<std::string>& tokens, const std::vector<RatingLexicon>& lexicons);

// One named feature row for a text.
struct FeatureRow {
  std::vector<std::string> names;
  std::vector<std::optional<double>> values;
};
FeatureRow text_features(std::string_view text, const std::set<std::string>* easy_words,
                         const std::vector<RatingLexicon>& lexicons);

}  // namespace readlens::lingfeat
