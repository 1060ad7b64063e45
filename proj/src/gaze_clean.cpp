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

#include "readlens/gaze_clean.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "readlens/corpus_io.hpp"
#include "readlens/error.hpp"

namespace readlens::gaze {

void CleanParams::validate() const {
  if (!(0 < min_fix_ms && min_fix_ms < max_fix_ms)) {
    throw Error(ErrorKind::Precondition,
                "clean params need 0 < min_fix_ms < max_fix_ms");
  }
}

GazeTrace drop_blinks(const GazeTrace& trace) {
  GazeTrace out = trace;
  std::erase_if(out.events,
                [](const GazeEvent& e) { return e.kind == EventKind::Blink; });
  return out;
}

GazeTrace filter_durations(const GazeTrace& trace, const CleanParams& params) {
  GazeTrace out = trace;
  std::erase_if(out.events, [&](const GazeEvent& e) {
    return e.kind == EventKind::Fixation &&
           (e.duration_ms < params.min_fix_ms || e.duration_ms > params.max_fix_ms);
  });
  return out;
}

int nearest_word_on_line(const AoiLayout& layout, int slide, int line, double x) {
  int best = -1;
  double best_gap = std::numeric_limits<double>::infinity();
  for (const auto& w : layout.words) {
    if (w.slide != slide || w.line != line) continue;
    double gap = x < w.x_min ? w.x_min - x : (x > w.x_max ? x - w.x_max : 0.0);
    if (gap < best_gap) {  // strict: ties keep the smaller index
      best_gap = gap;
      best = w.index;
    }
  }
  return best;
}

namespace {

// Lines of each slide that carry at least one word.
std::vector<std::vector<bool>> occupied_lines(const AoiLayout& layout) {
  std::vector<std::vector<bool>> occ(layout.line_y.size());
  for (std::size_t s = 0; s < layout.line_y.size(); ++s)
    occ[s].assign(layout.line_y[s].size(), false);
  for (const auto& w : layout.words) occ[w.slide][w.line] = true;
  return occ;
}

void place_on_word(AlignedFixation& f, const AoiLayout& layout, int word) {
  const auto& w = layout.words.at(word);
  f.word_index = w.index;
  f.slide = w.slide;
  f.line = w.line;
  f.event.slide = w.slide;
  f.event.y = layout.line_y[w.slide][w.line];
}

}  // namespace

void assign_visit_ordinals(std::vector<AlignedFixation>& aligned) {
  std::map<int, int> runs;  // word -> runs seen so far
  for (std::size_t i = 0; i < aligned.size(); ++i) {
    int w = aligned[i].word_index;
    bool continues = i > 0 && aligned[i - 1].word_index == w;
    if (!continues) ++runs[w];
    aligned[i].visit_ordinal = runs[w];
  }
}

std::vector<AlignedFixation> snap_to_lines(const GazeTrace& trace,
                                           const AoiLayout& layout) {
  const auto occ = occupied_lines(layout);
  std::vector<AlignedFixation> out;
  for (const auto& ev : trace.events) {
    if (ev.kind != EventKind::Fixation) continue;
    const int s = ev.slide;
    int best_line = -1;
    if (s >= 0 && s < static_cast<int>(layout.line_y.size())) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t l = 0; l < layout.line_y[s].size(); ++l) {
        if (!occ[s][l]) continue;
        double d = std::abs(ev.y - layout.line_y[s][l]);
        if (d < best) {
          best = d;
          best_line = static_cast<int>(l);
        }
      }
    }
    if (best_line < 0) {
      throw Error(ErrorKind::NoLayout,
                  "slide " + std::to_string(s) + " has no text lines");
    }
    AlignedFixation f;
    f.event = ev;
    place_on_word(f, layout, nearest_word_on_line(layout, s, best_line, ev.x));
    out.push_back(std::move(f));
  }
  assign_visit_ordinals(out);
  return out;
}

std::vector<AlignedFixation> smooth_line_outliers(
    const std::vector<AlignedFixation>& aligned, const AoiLayout& layout) {
  std::vector<AlignedFixation> out = aligned;
  for (std::size_t i = 1; i + 1 < out.size(); ++i) {
    const auto& prev = out[i - 1];
    const auto& next = out[i + 1];
    auto& cur = out[i];
    if (prev.slide != next.slide || prev.line != next.line) continue;
    if (cur.slide == prev.slide && cur.line == prev.line) continue;
    int word = nearest_word_on_line(layout, prev.slide, prev.line, cur.event.x);
    place_on_word(cur, layout, word);
  }
  assign_visit_ordinals(out);
  return out;
}

std::vector<AlignedFixation> remove_isolated(
    const std::vector<AlignedFixation>& aligned, int gap_words) {
  if (gap_words <= 0 || aligned.size() < 2) return aligned;
  std::vector<AlignedFixation> out;
  out.reserve(aligned.size());
  for (std::size_t i = 0; i < aligned.size(); ++i) {
    const int w = aligned[i].word_index;
    bool far_prev = i == 0 || std::abs(aligned[i - 1].word_index - w) >= gap_words;
    bool far_next = i + 1 == aligned.size() ||
                    std::abs(aligned[i + 1].word_index - w) >= gap_words;
    bool single_visit = (i == 0 || aligned[i - 1].word_index != w) &&
                        (i + 1 == aligned.size() || aligned[i + 1].word_index != w);
    if (!(far_prev && far_next && single_visit)) out.push_back(aligned[i]);
  }
  assign_visit_ordinals(out);
  return out;
}

std::vector<AlignedFixation> apply_overrides(
    const std::vector<AlignedFixation>& aligned, const Overrides& overrides,
    const AoiLayout& layout) {
  std::vector<AlignedFixation> out = aligned;
  for (const auto& [ordinal, word] : overrides) {
    if (ordinal < 1 || ordinal > static_cast<int>(out.size())) {
      throw Error(ErrorKind::OutOfRange,
                  "override for fixation " + std::to_string(ordinal) + " but only " +
                      std::to_string(out.size()) + " fixations remain");
    }
    if (word < 0 || word >= layout.word_count()) {
      throw Error(ErrorKind::LayoutMismatch,
                  "override targets word " + std::to_string(word) +
                      " outside the layout");
    }
    place_on_word(out[ordinal - 1], layout, word);
  }
  assign_visit_ordinals(out);
  return out;
}

CleanedTrace clean_trace(const GazeTrace& trace, const AoiLayout& layout,
                         const CleanParams& params, const Overrides& overrides) {
  params.validate();
  GazeTrace filtered = filter_durations(drop_blinks(trace), params);
  std::vector<AlignedFixation> aligned = snap_to_lines(filtered, layout);
  while (true) {
    std::vector<AlignedFixation> next = aligned;
    if (params.smoothing_enabled) next = smooth_line_outliers(next, layout);
    next = remove_isolated(next, params.isolation_gap_words);
    if (next == aligned) break;
    aligned = std::move(next);
  }
  if (!overrides.empty()) aligned = apply_overrides(aligned, overrides, layout);

  CleanedTrace out;
  out.trace = filtered;
  out.trace.events.clear();
  std::size_t k = 0;
  for (const auto& ev : filtered.events) {
    if (ev.kind != EventKind::Fixation) {
      out.trace.events.push_back(ev);
      continue;
    }
    while (k < aligned.size() && aligned[k].event.start_ms < ev.start_ms) ++k;
    if (k < aligned.size() && aligned[k].event.start_ms == ev.start_ms) {
      out.trace.events.push_back(aligned[k].event);
    }
  }
  out.fixations = std::move(aligned);
  return out;
}

Overrides parse_overrides_text(std::string_view text) {
  Overrides out;
  std::size_t line_no = 0;
  for (const auto& raw : io::split(text, '\n')) {
    ++line_no;
    std::string_view line = io::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fields = io::split(line, '\t');
    if (fields.size() < 2) {
      throw Error(ErrorKind::MalformedRow,
                  "override line " + std::to_string(line_no) +
                      ": expected fixation_ordinal<TAB>word_index");
    }
    if (out.empty() && line_no == 1 && !std::isdigit(static_cast<unsigned char>(
                                            io::trim(fields[0]).front()))) {
      continue;  // header
    }
    std::string ctx = "override line " + std::to_string(line_no);
    out[static_cast<int>(io::parse_int(fields[0], ctx))] =
        static_cast<int>(io::parse_int(fields[1], ctx));
  }
  return out;
}

Overrides parse_overrides(const std::filesystem::path& path) {
  return parse_overrides_text(io::read_file(path));
}

}  // namespace readlens::gaze
