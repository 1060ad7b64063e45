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

#include "readlens/gaze_features.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "readlens/corpus_io.hpp"
#include "readlens/error.hpp"
#include "readlens/kernels.hpp"

namespace readlens::gaze {

namespace {

constexpr std::size_t kAoiWidth =
    kFixationNames.size() + kSaccadeNames.size() + kRegressionNames.size();

// Running totals for one AoI; visits are counted as the stream is scanned.
struct FixAcc {
  double tFD = 0, FFD = 0, SFD = 0, LFD = 0, tFC = 0, visits = 0;

  void add(double d, bool new_visit) {
    if (new_visit) visits += 1;
    tFD += d;
    tFC += 1;
    if (new_visit && visits == 1) FFD = d;
    if (new_visit && visits == 2) SFD = d;
    if (visits >= 3) LFD += d;
  }

  FixationFeatures finish() const {
    FixationFeatures f;
    f.tFD = tFD;
    f.FFD = FFD;
    f.SFD = SFD;
    f.LFD = LFD;
    f.tFC = tFC;
    f.aFD = tFC > 0 ? tFD / tFC : 0.0;
    f.aFC = visits > 0 ? tFC / visits : 0.0;
    return f;
  }
};

struct MoveAcc {
  double dur = 0, count = 0, v_sum = 0, v_n = 0, pv_sum = 0, pv_n = 0;
  double read = 0, skipped = 0, amp_sum = 0;

  void add(const SaccadeClassified& s) {
    dur += static_cast<double>(s.event.duration_ms);
    count += 1;
    if (s.event.avg_velocity) {
      v_sum += *s.event.avg_velocity;
      v_n += 1;
    }
    if (s.event.peak_velocity) {
      pv_sum += *s.event.peak_velocity;
      pv_n += 1;
    }
    int span = std::abs(s.landing_word - s.launch_word);
    if (span > 0) {
      read += 1;
      skipped += span - 1;
    }
    amp_sum += s.amplitude_px;
  }

  double mean_v() const { return v_n > 0 ? v_sum / v_n : 0.0; }
  double mean_pv() const { return pv_n > 0 ? pv_sum / pv_n : 0.0; }
  double mean_amp() const { return count > 0 ? amp_sum / count : 0.0; }

  SaccadeFeatures as_saccade() const {
    return {dur, count, mean_v(), mean_pv(), read, skipped, mean_amp()};
  }

  RegressionFeatures as_regression(double sc) const {
    RegressionFeatures r{dur, count, mean_v(), mean_pv(), read, skipped, mean_amp(), {}};
    if (count > 0) r.rSR = sc / count;
    return r;
  }
};

void push(std::vector<Cell>& row, const FixationFeatures& f) {
  row.insert(row.end(), {f.tFD, f.FFD, f.SFD, f.LFD, f.aFD, f.tFC, f.aFC});
}
void push(std::vector<Cell>& row, const SaccadeFeatures& s) {
  row.insert(row.end(), {s.SD, s.SC, s.SV, s.SpV, s.rS, s.sS, s.SA});
}
void push(std::vector<Cell>& row, const RegressionFeatures& r) {
  row.insert(row.end(), {r.RD, r.RC, r.RV, r.RpV, r.rR, r.sR, r.RA});
  row.push_back(r.rSR);
}

std::string label_text(const GazeTrace& t) {
  if (!t.label) return "";
  return *t.label == ReadingLabel::High ? "high" : "low";
}

void check_words(const CleanedTrace& cleaned, const AoiLayout& layout) {
  for (const auto& f : cleaned.fixations) {
    if (f.word_index < 0 || f.word_index >= layout.word_count()) {
      throw Error(ErrorKind::LayoutMismatch,
                  "trace " + sample_id(cleaned.trace) + " references word " +
                      std::to_string(f.word_index) + " outside the layout");
    }
  }
}

}  // namespace

std::vector<SaccadeClassified> classify_saccades(const CleanedTrace& cleaned) {
  std::vector<SaccadeClassified> out;
  const auto& ev = cleaned.trace.events;
  std::size_t fix_seen = 0;
  for (std::size_t p = 0; p < ev.size(); ++p) {
    if (ev[p].kind == EventKind::Fixation) {
      ++fix_seen;
      continue;
    }
    if (ev[p].kind != EventKind::Saccade) continue;
    if (p == 0 || p + 1 >= ev.size()) continue;
    if (ev[p - 1].kind != EventKind::Fixation || ev[p + 1].kind != EventKind::Fixation)
      continue;
    const auto& before = cleaned.fixations.at(fix_seen - 1);
    const auto& after = cleaned.fixations.at(fix_seen);
    SaccadeClassified s;
    s.event = ev[p];
    s.launch_word = before.word_index;
    s.landing_word = after.word_index;
    s.direction =
        s.landing_word < s.launch_word ? Direction::Regression : Direction::Forward;
    if (ev[p].end_x && ev[p].end_y) {
      s.amplitude_px = std::hypot(*ev[p].end_x - ev[p].x, *ev[p].end_y - ev[p].y);
    } else {
      s.amplitude_px = std::hypot(after.event.x - before.event.x,
                                  after.event.y - before.event.y);
    }
    out.push_back(std::move(s));
  }
  return out;
}

FixationFeatures fixation_features_of_visits(
    const std::vector<std::vector<double>>& visits) {
  FixAcc acc;
  for (const auto& v : visits) {
    for (std::size_t i = 0; i < v.size(); ++i) acc.add(v[i], i == 0);
  }
  return acc.finish();
}

FixationFeatures fixation_features(std::span<const AlignedFixation> fixations,
                                   Span aoi) {
  FixAcc acc;
  bool inside_prev = false;
  for (const auto& f : fixations) {
    bool inside = aoi.contains(f.word_index);
    if (inside) acc.add(static_cast<double>(f.event.duration_ms), !inside_prev);
    inside_prev = inside;
  }
  return acc.finish();
}

SaccadeFeatures saccade_features(Span aoi,
                                 std::span<const SaccadeClassified> saccades) {
  MoveAcc acc;
  for (const auto& s : saccades)
    if (s.direction == Direction::Forward && aoi.contains(s.landing_word)) acc.add(s);
  return acc.as_saccade();
}

RegressionFeatures regression_features(Span aoi,
                                       std::span<const SaccadeClassified> saccades,
                                       double saccade_count_of_aoi) {
  MoveAcc acc;
  for (const auto& s : saccades)
    if (s.direction == Direction::Regression && aoi.contains(s.landing_word)) acc.add(s);
  return acc.as_regression(saccade_count_of_aoi);
}

std::size_t feature_column_count(const AoiLayout& layout) {
  std::size_t n = static_cast<std::size_t>(layout.word_count()) * kFixationNames.size();
  for (std::size_t l = 1; l < kAllLevels.size(); ++l)
    n += layout.level_spans(kAllLevels[l]).size() * kAoiWidth;
  return n;
}

std::vector<std::string> feature_column_names(const AoiLayout& layout) {
  std::vector<std::string> names;
  names.reserve(feature_column_count(layout));
  for (int w = 0; w < layout.word_count(); ++w)
    for (const char* f : kFixationNames)
      names.push_back(std::string("word:") + std::to_string(w) + ":" + f);
  for (std::size_t l = 1; l < kAllLevels.size(); ++l) {
    const std::string level = level_name(kAllLevels[l]);
    const std::size_t n = layout.level_spans(kAllLevels[l]).size();
    for (std::size_t a = 0; a < n; ++a) {
      const std::string prefix = level + ":" + std::to_string(a) + ":";
      for (const char* f : kFixationNames) names.push_back(prefix + f);
      for (const char* f : kSaccadeNames) names.push_back(prefix + f);
      for (const char* f : kRegressionNames) names.push_back(prefix + f);
    }
  }
  return names;
}

std::vector<FixationFeatures> word_fixation_features(const CleanedTrace& cleaned,
                                                     const AoiLayout& layout) {
  check_words(cleaned, layout);
  // A visit is a run on the same word.
  std::vector<FixAcc> acc(layout.word_count());
  int prev = -1;
  for (const auto& f : cleaned.fixations) {
    acc[f.word_index].add(static_cast<double>(f.event.duration_ms), f.word_index != prev);
    prev = f.word_index;
  }
  std::vector<FixationFeatures> out;
  out.reserve(acc.size());
  for (const auto& a : acc) out.push_back(a.finish());
  return out;
}

std::vector<Cell> trace_feature_row(const CleanedTrace& cleaned,
                                    const AoiLayout& layout) {
  check_words(cleaned, layout);
  const auto saccades = classify_saccades(cleaned);
  std::vector<Cell> row;
  row.reserve(feature_column_count(layout));

  for (const auto& f : word_fixation_features(cleaned, layout)) push(row, f);

  for (std::size_t l = 1; l < kAllLevels.size(); ++l) {
    const AoiLevel level = kAllLevels[l];
    const std::size_t n = layout.level_spans(level).size();
    std::vector<FixAcc> fix(n);
    std::vector<MoveAcc> fwd(n), reg(n);
    int prev = -1;
    for (const auto& f : cleaned.fixations) {
      int a = layout.span_of(level, f.word_index);
      fix[a].add(static_cast<double>(f.event.duration_ms), a != prev);
      prev = a;
    }
    for (const auto& s : saccades) {
      int a = layout.span_of(level, s.landing_word);
      (s.direction == Direction::Forward ? fwd : reg)[a].add(s);
    }
    for (std::size_t a = 0; a < n; ++a) {
      push(row, fix[a].finish());
      push(row, fwd[a].as_saccade());
      push(row, reg[a].as_regression(fwd[a].count));
    }
  }
  return row;
}

std::string sample_id(const GazeTrace& trace) {
  return trace.participant_id + "_s" + std::to_string(trace.session) + "_d" +
         std::to_string(trace.day);
}

FeatureMatrix build_matrix(const std::vector<CleanedTrace>& traces,
                           const AoiLayout& layout) {
  FeatureMatrix m;
  m.feature_names = feature_column_names(layout);
  auto rows = kernels::feature_rows(traces, layout);
  for (std::size_t i = 0; i < traces.size(); ++i) {
    FeatureMatrix::Row r;
    r.sample_id = sample_id(traces[i].trace);
    if (traces[i].trace.label) r.label = label_text(traces[i].trace);
    r.values = std::move(rows[i]);
    m.rows.push_back(std::move(r));
  }
  // rSR is the only feature that can be missing; fill with the column mean.
  for (std::size_t c = 0; c < m.cols(); ++c) {
    double sum = 0;
    std::size_t n = 0, missing = 0;
    for (const auto& r : m.rows) {
      if (r.values[c]) {
        sum += *r.values[c];
        ++n;
      } else {
        ++missing;
      }
    }
    if (missing == 0) continue;
    const double fill = n > 0 ? sum / static_cast<double>(n) : 0.0;
    for (auto& r : m.rows)
      if (!r.values[c]) r.values[c] = fill;
  }
  return m;
}

std::vector<ElementAggregate> aggregate_by_element(
    const std::vector<CleanedTrace>& traces, const AoiLayout& layout) {
  if (layout.elements.empty()) {
    throw Error(ErrorKind::NoLayout, "layout has no text elements");
  }
  // (element order, day, label, feature order) -> values
  using Key = std::tuple<std::size_t, int, std::string, std::size_t>;
  std::map<Key, std::vector<double>> groups;
  for (const auto& t : traces) {
    check_words(t, layout);
    const auto saccades = classify_saccades(t);
    const std::string label = label_text(t.trace);
    for (std::size_t e = 0; e < layout.elements.size(); ++e) {
      const Span span = layout.elements[e].second;
      std::vector<Cell> vals;
      push(vals, fixation_features(t.fixations, span));
      auto sf = saccade_features(span, saccades);
      push(vals, sf);
      push(vals, regression_features(span, saccades, sf.SC));
      for (std::size_t f = 0; f < vals.size(); ++f)
        if (vals[f]) groups[{e, t.trace.day, label, f}].push_back(*vals[f]);
    }
  }
  std::vector<std::string> names;
  for (const char* f : kFixationNames) names.emplace_back(f);
  for (const char* f : kSaccadeNames) names.emplace_back(f);
  for (const char* f : kRegressionNames) names.emplace_back(f);

  std::vector<ElementAggregate> out;
  for (const auto& [key, vals] : groups) {
    const auto& [e, day, label, f] = key;
    double mean = 0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double ss = 0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    out.push_back({layout.elements[e].first, day, label, names[f], mean,
                   std::sqrt(ss / static_cast<double>(vals.size())),
                   static_cast<int>(vals.size())});
  }
  return out;
}

std::string write_element_csv(const std::vector<ElementAggregate>& rows) {
  std::ostringstream out;
  out << "element,day,label,feature,mean,sd,n\n";
  for (const auto& r : rows) {
    out << r.element << ',' << r.day << ',' << r.label << ',' << r.feature << ','
        << io::format_double(r.mean) << ',' << io::format_double(r.sd) << ',' << r.n
        << '\n';
  }
  return out.str();
}

}  // namespace readlens::gaze
