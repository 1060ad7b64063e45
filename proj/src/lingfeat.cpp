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

#include "readlens/lingfeat.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "readlens/error.hpp"
#include "readlens/simsem.hpp"

namespace readlens::lingfeat {

namespace {

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

const std::unordered_map<std::string, int>& syllable_exceptions() {
  static const std::unordered_map<std::string, int> kExceptions = {
      {"area", 3},  {"idea", 3},    {"being", 2},   {"create", 2},   {"poem", 2},
      {"quiet", 2}, {"lion", 2},    {"science", 2}, {"every", 2},    {"business", 2},
      {"real", 1},  {"video", 3},   {"radio", 3},   {"piano", 3},    {"naive", 2},
      {"ago", 2},   {"people", 2},  {"one", 1},     {"once", 1},     {"were", 1},
  };
  return kExceptions;
}

}  // namespace

int count_syllables(std::string_view word) {
  std::string w;
  for (char c : word)
    if (std::isalpha(static_cast<unsigned char>(c)))
      w += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (w.empty()) return 1;
  if (auto it = syllable_exceptions().find(w); it != syllable_exceptions().end())
    return it->second;

  int groups = 0;
  bool prev_vowel = false;
  for (char c : w) {
    const bool v = is_vowel(c);
    if (v && !prev_vowel) ++groups;
    prev_vowel = v;
  }
  const std::size_t n = w.size();
  auto at = [&](std::size_t back) { return w[n - 1 - back]; };
  if (groups > 1 && n >= 2 && at(0) == 'e' && !is_vowel(at(1))) {
    const bool consonant_le = n >= 3 && at(1) == 'l' && !is_vowel(at(2));
    if (!consonant_le) --groups;
  } else if (groups > 1 && n >= 3 && at(0) == 'd' && at(1) == 'e' && at(2) != 't' &&
             at(2) != 'd' && !is_vowel(at(2))) {
    --groups;  // jumped, played
  } else if (groups > 1 && n >= 3 && at(0) == 's' && at(1) == 'e' && !is_vowel(at(2)) &&
             std::string_view("sxzcgh").find(at(2)) == std::string_view::npos) {
    --groups;  // makes, games
  }
  return std::max(groups, 1);
}

std::vector<std::string> words_of(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : simsem::tokenize(text)) {
    if (std::any_of(t.begin(), t.end(),
                    [](char c) { return std::isalpha(static_cast<unsigned char>(c)); }))
      out.push_back(std::move(t));
  }
  return out;
}

TextProfile profile_text(std::string_view text, const std::set<std::string>* easy_words) {
  TextProfile p;
  for (const auto& s : simsem::split_sentences(text))
    if (!words_of(s).empty()) ++p.sentences;
  const auto words = words_of(text);
  p.words = static_cast<int>(words.size());
  int difficult = 0;
  for (const auto& w : words) {
    const int syl = count_syllables(w);
    p.syllables += syl;
    if (syl >= 3) ++p.complex_words;
    for (char c : w) p.characters += std::isalpha(static_cast<unsigned char>(c)) ? 1 : 0;
    if (easy_words && !easy_words->count(w)) ++difficult;
  }
  if (easy_words) p.difficult_words = difficult;
  return p;
}

Readability readability(const TextProfile& p, bool require_dale_chall) {
  if (p.sentences < 1 || p.words < 1) {
    throw Error(ErrorKind::Precondition, "readability needs at least one sentence and word");
  }
  const double W = p.words, S = p.sentences;
  Readability r;
  r.fre = 206.835 - 1.015 * (W / S) - 84.6 * (p.syllables / W);
  r.fog = 0.4 * (W / S + 100.0 * p.complex_words / W);
  r.smog = 1.0430 * std::sqrt(p.complex_words * 30.0 / S) + 3.1291;
  r.ari = 4.71 * (p.characters / W) + 0.5 * (W / S) - 21.43;
  const double L = 100.0 * p.characters / W;
  const double S100 = 100.0 * S / W;
  r.coleman_liau = 0.0588 * L - 0.296 * S100 - 15.8;
  if (p.difficult_words) {
    const double pct = 100.0 * *p.difficult_words / W;
    double dc = 0.1579 * pct + 0.0496 * (W / S);
    if (pct > 5.0) dc += 3.6365;
    r.dale_chall = dc;
  } else if (require_dale_chall) {
    throw Error(ErrorKind::MissingResource, "dale_chall needs an easy-word list");
  }
  return r;
}

TtrFamily ttr_family(const std::vector<std::string>& tokens) {
  if (tokens.empty()) throw Error(ErrorKind::EmptyInput, "no tokens");
  const std::unordered_set<std::string> types(tokens.begin(), tokens.end());
  const double N = static_cast<double>(tokens.size());
  const double T = static_cast<double>(types.size());
  TtrFamily f;
  f.ttr = T / N;
  f.rttr = T / std::sqrt(N);
  f.cttr = T / std::sqrt(2.0 * N);
  f.ndw = static_cast<int>(types.size());
  if (tokens.size() > 1) f.log_ttr = std::log(T) / std::log(N);
  if (types.size() < tokens.size()) {
    const double ln = std::log(N);
    f.uber = ln * ln / (ln - std::log(T));
  }
  constexpr std::size_t kSeg = 50;
  if (tokens.size() >= kSeg) {
    double sum = 0;
    const std::size_t segs = tokens.size() / kSeg;
    for (std::size_t s = 0; s < segs; ++s) {
      std::unordered_set<std::string> seg(tokens.begin() + s * kSeg,
                                          tokens.begin() + (s + 1) * kSeg);
      sum += static_cast<double>(seg.size()) / kSeg;
    }
    f.msttr50 = sum / static_cast<double>(segs);
  }
  return f;
}

std::vector<std::pair<RatingFactor, std::optional<BinShares>>> rating_bin_profile(
    const std::vector<std::string>& tokens, const std::vector<RatingLexicon>& lexicons) {
  std::vector<std::pair<RatingFactor, std::optional<BinShares>>> out;
  for (const auto& lex : lexicons) {
    if (lex.scale_points != 9) {
      throw Error(ErrorKind::Precondition,
                  std::string("rating bins need a 9-point scale for ") + factor_name(lex.factor));
    }
    double low = 0, mid = 0, high = 0;
    for (const auto& t : tokens) {
      auto r = lex.rating(t);
      if (!r) continue;
      if (*r <= 3) {
        low += 1;
      } else if (*r <= 6) {
        mid += 1;
      } else {
        high += 1;
      }
    }
    const double n = low + mid + high;
    if (n == 0) {
      out.emplace_back(lex.factor, std::nullopt);
    } else {
      out.emplace_back(lex.factor, BinShares{100.0 * low / n, 100.0 * mid / n, 100.0 * high / n});
    }
  }
  return out;
}

FeatureRow text_features(std::string_view text, const std::set<std::string>* easy_words,
                         const std::vector<RatingLexicon>& lexicons) {
  FeatureRow row;
  auto put = [&](const std::string& name, std::optional<double> v) {
    row.names.push_back(name);
    row.values.push_back(v);
  };
  const TextProfile p = profile_text(text, easy_words);
  put("words", p.words);
  put("sentences", p.sentences);
  put("syllables", p.syllables);
  put("complex_words", p.complex_words);
  put("characters", p.characters);
  const Readability r = readability(p, false);
  put("fre", r.fre);
  put("fog", r.fog);
  put("smog", r.smog);
  put("ari", r.ari);
  put("coleman_liau", r.coleman_liau);
  if (easy_words) put("dale_chall", r.dale_chall);
  const auto words = words_of(text);
  const TtrFamily t = ttr_family(words);
  put("ttr", t.ttr);
  put("rttr", t.rttr);
  put("cttr", t.cttr);
  put("log_ttr", t.log_ttr);
  put("msttr50", t.msttr50);
  put("ndw", t.ndw);
  put("uber", t.uber);
  for (const auto& [factor, shares] : rating_bin_profile(words, lexicons)) {
    const std::string f = factor_name(factor);
    put(f + "_low", shares ? std::optional(shares->low) : std::nullopt);
    put(f + "_mid", shares ? std::optional(shares->mid) : std::nullopt);
    put(f + "_high", shares ? std::optional(shares->high) : std::nullopt);
  }
  return row;
}

}  // namespace readlens::lingfeat
