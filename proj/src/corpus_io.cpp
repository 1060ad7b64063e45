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

#include "readlens/corpus_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "readlens/error.hpp"

namespace readlens::io {

namespace {

std::string line_ctx(std::size_t line_no) {
  return "line " + std::to_string(line_no);
}

// Splits text into lines, dropping a trailing '\r' from each.
std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (nl == text.size() && line.empty()) break;
    out.push_back(line);
    pos = nl + 1;
  }
  return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool try_parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

std::optional<double> optional_field(std::string_view s,
                                     const std::string& context) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  if (!try_parse_double(s, v)) {
    throw Error(ErrorKind::MalformedRow,
                context + ": not a number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(std::string_view s, char delim) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(delim, pos);
    if (next == std::string_view::npos) {
      out.emplace_back(s.substr(pos));
      break;
    }
    out.emplace_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

double parse_double(std::string_view s, const std::string& context) {
  double v = 0.0;
  if (!try_parse_double(s, v)) {
    throw Error(ErrorKind::MalformedRow,
                context + ": not a number '" + std::string(trim(s)) + "'");
  }
  return v;
}

std::int64_t parse_int(std::string_view s, const std::string& context) {
  s = trim(s);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::MalformedRow,
                context + ": not an integer '" + std::string(s) + "'");
  }
  return v;
}

std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// Gaze CSV

namespace {

constexpr const char* kGazeColumns[] = {"kind",     "eye",   "start_ms",
                                        "end_ms",   "x",     "y",
                                        "pupil",    "avg_vel", "peak_vel",
                                        "end_x",    "end_y"};

void apply_trace_meta(std::string_view comment, GazeTrace& trace) {
  for (auto tok : split_ws(comment)) {
    auto eq = tok.find('=');
    if (eq == std::string_view::npos) continue;
    std::string key = to_lower(tok.substr(0, eq));
    std::string_view value = tok.substr(eq + 1);
    if (key == "participant") {
      trace.participant_id = std::string(value);
    } else if (key == "session") {
      trace.session = static_cast<int>(parse_int(value, "session"));
    } else if (key == "day") {
      trace.day = static_cast<int>(parse_int(value, "day"));
    } else if (key == "label") {
      std::string l = to_lower(value);
      if (l == "high") {
        trace.label = ReadingLabel::High;
      } else if (l == "low") {
        trace.label = ReadingLabel::Low;
      } else if (!l.empty() && l != "none") {
        throw Error(ErrorKind::MalformedRow, "unknown label '" + l + "'");
      }
    }
  }
}

}  // namespace

GazeTrace parse_gaze_log_text(std::string_view text,
                              std::string default_participant) {
  GazeTrace trace;
  trace.participant_id = std::move(default_participant);
  std::map<std::string, std::size_t> col;
  bool have_header = false;
  std::size_t line_no = 0;
  for (auto raw : lines_of(text)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      apply_trace_meta(line.substr(1), trace);
      continue;
    }
    auto fields = split(line, ',');
    if (!have_header) {
      for (std::size_t i = 0; i < fields.size(); ++i)
        col[to_lower(trim(fields[i]))] = i;
      for (const char* name : kGazeColumns) {
        if (!col.count(name)) {
          throw Error(ErrorKind::MalformedRow,
                      line_ctx(line_no) + ": header lacks column '" +
                          std::string(name) + "'");
        }
      }
      have_header = true;
      continue;
    }
    const std::string ctx = line_ctx(line_no);
    auto field = [&](const char* name) -> std::string_view {
      auto it = col.find(name);
      if (it == col.end() || it->second >= fields.size()) return {};
      return trim(fields[it->second]);
    };
    GazeEvent ev;
    std::string kind = to_lower(field("kind"));
    if (kind == "fixation") {
      ev.kind = EventKind::Fixation;
    } else if (kind == "saccade") {
      ev.kind = EventKind::Saccade;
    } else if (kind == "blink") {
      ev.kind = EventKind::Blink;
    } else {
      throw Error(ErrorKind::MalformedRow, ctx + ": unknown event kind '" + kind + "'");
    }
    std::string eye = to_lower(field("eye"));
    if (eye == "left" || eye == "l") {
      ev.eye = Eye::Left;
    } else if (eye == "right" || eye == "r") {
      ev.eye = Eye::Right;
    } else {
      throw Error(ErrorKind::MalformedRow, ctx + ": unknown eye '" + eye + "'");
    }
    ev.start_ms = parse_int(field("start_ms"), ctx);
    ev.end_ms = parse_int(field("end_ms"), ctx);
    if (ev.end_ms <= ev.start_ms) {
      throw Error(ErrorKind::MalformedRow, ctx + ": end_ms must exceed start_ms");
    }
    ev.duration_ms = ev.end_ms - ev.start_ms;
    if (ev.kind == EventKind::Blink) {
      ev.x = optional_field(field("x"), ctx).value_or(0.0);
      ev.y = optional_field(field("y"), ctx).value_or(0.0);
    } else {
      ev.x = parse_double(field("x"), ctx);
      ev.y = parse_double(field("y"), ctx);
    }
    if (col.count("slide") && !field("slide").empty()) {
      ev.slide = static_cast<int>(parse_int(field("slide"), ctx));
    }
    ev.pupil = optional_field(field("pupil"), ctx);
    ev.avg_velocity = optional_field(field("avg_vel"), ctx);
    ev.peak_velocity = optional_field(field("peak_vel"), ctx);
    ev.end_x = optional_field(field("end_x"), ctx);
    ev.end_y = optional_field(field("end_y"), ctx);
    bool has_saccade_fields = ev.avg_velocity || ev.peak_velocity ||
                              ev.end_x || ev.end_y;
    if (ev.kind != EventKind::Saccade && has_saccade_fields) {
      throw Error(ErrorKind::MalformedRow,
                  ctx + ": saccade-only field set on a " + kind);
    }
    if (ev.kind != EventKind::Fixation && ev.pupil) {
      throw Error(ErrorKind::MalformedRow,
                  ctx + ": pupil size set on a " + kind);
    }
    if (!trace.events.empty() && ev.start_ms <= trace.events.back().start_ms) {
      throw Error(ErrorKind::UnsortedEvents,
                  ctx + ": start_ms " + std::to_string(ev.start_ms) +
                      " does not follow " +
                      std::to_string(trace.events.back().start_ms));
    }
    trace.events.push_back(ev);
  }
  if (!have_header) {
    throw Error(ErrorKind::MalformedRow, "gaze log has no header row");
  }
  return trace;
}

GazeTrace parse_gaze_log(const std::filesystem::path& path) {
  try {
    return parse_gaze_log_text(read_file(path), path.stem().string());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string write_gaze_log(const GazeTrace& trace) {
  std::ostringstream out;
  out << "# participant=" << trace.participant_id
      << " session=" << trace.session << " day=" << trace.day;
  if (trace.label) {
    out << " label=" << (*trace.label == ReadingLabel::High ? "high" : "low");
  }
  out << "\nkind,eye,start_ms,end_ms,x,y,pupil,avg_vel,peak_vel,end_x,end_y,"
         "slide\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  for (const auto& ev : trace.events) {
    const char* kind = ev.kind == EventKind::Fixation  ? "fixation"
                       : ev.kind == EventKind::Saccade ? "saccade"
                                                       : "blink";
    out << kind << ',' << (ev.eye == Eye::Left ? "left" : "right") << ','
        << ev.start_ms << ',' << ev.end_ms << ',' << format_double(ev.x) << ','
        << format_double(ev.y) << ',' << opt(ev.pupil) << ','
        << opt(ev.avg_velocity) << ',' << opt(ev.peak_velocity) << ','
        << opt(ev.end_x) << ',' << opt(ev.end_y) << ',' << ev.slide << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// AoI layout

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr AoiLevel kFileLevels[] = {AoiLevel::SubSentence, AoiLevel::Sentence,
                                    AoiLevel::Paragraph, AoiLevel::Slide};

Span read_span(const ordered_json& j, int word_count, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() ||
      !j[1].is_number_integer()) {
    throw Error(ErrorKind::MalformedRow, what + ": span must be [first, last]");
  }
  Span s{j[0].get<int>(), j[1].get<int>()};
  if (s.first < 0 || s.last < s.first || s.last >= word_count) {
    throw Error(ErrorKind::OutOfRange,
                what + ": span [" + std::to_string(s.first) + ", " +
                    std::to_string(s.last) + "] outside 0.." +
                    std::to_string(word_count - 1));
  }
  return s;
}

void check_partition(AoiLevel level, std::vector<Span>& spans, int word_count) {
  std::vector<int> owner(word_count, 0);
  for (const auto& s : spans)
    for (int w = s.first; w <= s.last; ++w) ++owner[w];
  for (int w = 0; w < word_count; ++w) {
    if (owner[w] == 0) {
      throw Error(ErrorKind::CoverageGap, std::string(level_name(level)) +
                                              ": word " + std::to_string(w) +
                                              " belongs to no span");
    }
    if (owner[w] > 1) {
      throw Error(ErrorKind::OverlapError, std::string(level_name(level)) +
                                               ": word " + std::to_string(w) +
                                               " belongs to several spans");
    }
  }
  std::sort(spans.begin(), spans.end(),
            [](const Span& a, const Span& b) { return a.first < b.first; });
}

}  // namespace

AoiLayout parse_aoi_layout_text(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedRow, std::string("layout JSON: ") + e.what());
  }
  AoiLayout layout;
  try {
    for (const auto& line : doc.at("lines")) {
      int slide = line.at("slide").get<int>();
      if (slide < 0) throw Error(ErrorKind::OutOfRange, "negative slide index");
      if (static_cast<int>(layout.line_y.size()) <= slide)
        layout.line_y.resize(slide + 1);
      layout.line_y[slide].push_back(line.at("y").get<double>());
    }
    for (const auto& w : doc.at("words")) {
      WordBox box;
      box.index = w.at("index").get<int>();
      box.text = w.value("text", "");
      box.slide = w.at("slide").get<int>();
      box.line = w.at("line").get<int>();
      box.x_min = w.at("x_min").get<double>();
      box.x_max = w.at("x_max").get<double>();
      if (box.x_max < box.x_min) {
        throw Error(ErrorKind::MalformedRow,
                    "word " + std::to_string(box.index) + ": x_max < x_min");
      }
      if (box.slide < 0 || box.slide >= static_cast<int>(layout.line_y.size()) ||
          box.line < 0 ||
          box.line >= static_cast<int>(layout.line_y[box.slide].size())) {
        throw Error(ErrorKind::LayoutMismatch,
                    "word " + std::to_string(box.index) +
                        " refers to a line the layout does not declare");
      }
      layout.words.push_back(std::move(box));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedRow, std::string("layout JSON: ") + e.what());
  }
  std::sort(layout.words.begin(), layout.words.end(),
            [](const WordBox& a, const WordBox& b) { return a.index < b.index; });
  const int n = layout.word_count();
  if (n == 0) throw Error(ErrorKind::EmptyInput, "layout has no words");
  for (int i = 0; i < n; ++i) {
    if (layout.words[i].index != i) {
      if (i > 0 && layout.words[i].index == layout.words[i - 1].index) {
        throw Error(ErrorKind::OverlapError,
                    "word: index " + std::to_string(layout.words[i].index) +
                        " declared twice");
      }
      throw Error(ErrorKind::CoverageGap,
                  "word: index " + std::to_string(i) + " missing");
    }
  }

  auto& word_spans = layout.spans[static_cast<std::size_t>(AoiLevel::Word)];
  for (int i = 0; i < n; ++i) word_spans.push_back({i, i});
  layout.spans[static_cast<std::size_t>(AoiLevel::WholeText)] = {{0, n - 1}};

  const auto spans_it = doc.find("spans");
  if (spans_it == doc.end() || !spans_it->is_object()) {
    throw Error(ErrorKind::MalformedRow, "layout JSON lacks a spans object");
  }
  for (AoiLevel level : kFileLevels) {
    const char* name = level_name(level);
    auto it = spans_it->find(name);
    if (it == spans_it->end() || !it->is_array()) {
      throw Error(ErrorKind::CoverageGap,
                  std::string(name) + ": level not declared in spans");
    }
    auto& spans = layout.spans[static_cast<std::size_t>(level)];
    for (const auto& s : *it) spans.push_back(read_span(s, n, name));
    check_partition(level, spans, n);
  }

  if (auto el = doc.find("elements"); el != doc.end()) {
    for (auto it = el->begin(); it != el->end(); ++it) {
      layout.elements.emplace_back(it.key(),
                                   read_span(it.value(), n, "element " + it.key()));
    }
  }
  return layout;
}

AoiLayout parse_aoi_layout(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorKind::Io, "layout not found: " + path.string());
  }
  return parse_aoi_layout_text(read_file(path));
}

std::string write_aoi_layout(const AoiLayout& layout) {
  ordered_json doc;
  doc["lines"] = ordered_json::array();
  for (std::size_t s = 0; s < layout.line_y.size(); ++s) {
    for (double y : layout.line_y[s]) {
      doc["lines"].push_back({{"slide", s}, {"y", y}});
    }
  }
  doc["words"] = ordered_json::array();
  for (const auto& w : layout.words) {
    doc["words"].push_back({{"index", w.index},
                            {"text", w.text},
                            {"slide", w.slide},
                            {"line", w.line},
                            {"x_min", w.x_min},
                            {"x_max", w.x_max}});
  }
  ordered_json spans = ordered_json::object();
  for (AoiLevel level : kFileLevels) {
    ordered_json arr = ordered_json::array();
    for (const auto& s : layout.level_spans(level)) arr.push_back({s.first, s.last});
    spans[level_name(level)] = std::move(arr);
  }
  doc["spans"] = std::move(spans);
  if (!layout.elements.empty()) {
    ordered_json el = ordered_json::object();
    for (const auto& [name, s] : layout.elements) el[name] = {s.first, s.last};
    doc["elements"] = std::move(el);
  }
  return doc.dump(1) + "\n";
}

// ---------------------------------------------------------------------------
// CoNLL-U

std::vector<ParsedSentence> parse_conllu_text(std::string_view text) {
  std::vector<ParsedSentence> out;
  struct Pending {
    std::vector<TokenQuartet> tokens;
    std::vector<int> heads;
  } cur;
  std::size_t line_no = 0;

  auto flush = [&] {
    if (cur.tokens.empty()) return;
    const int n = static_cast<int>(cur.tokens.size());
    const int sentence_no = static_cast<int>(out.size()) + 1;
    for (int i = 0; i < n; ++i) {
      int head = cur.heads[i];
      if (head < 0 || head > n) {
        throw Error(ErrorKind::BadHead,
                    "sentence " + std::to_string(sentence_no) + ", token " +
                        std::to_string(i + 1) + ": head " +
                        std::to_string(head) + " outside 0.." +
                        std::to_string(n));
      }
      cur.tokens[i].dep_dist = head == 0 ? 0 : std::abs((i + 1) - head);
    }
    out.push_back(ParsedSentence{std::move(cur.tokens)});
    cur = Pending{};
  };

  for (auto raw : lines_of(text)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') continue;
    auto fields = split(raw, '\t');
    if (fields.size() != 10) {
      throw Error(ErrorKind::MalformedRow,
                  line_ctx(line_no) + ": expected 10 tab-separated columns, got " +
                      std::to_string(fields.size()));
    }
    const std::string& id = fields[0];
    // Multiword ranges (3-4) and empty nodes (5.1) carry no head.
    if (id.find_first_of("-.") != std::string::npos) continue;
    int index = static_cast<int>(parse_int(id, line_ctx(line_no)));
    if (index != static_cast<int>(cur.tokens.size()) + 1) {
      throw Error(ErrorKind::MalformedRow,
                  line_ctx(line_no) + ": token id " + id + " out of sequence");
    }
    int head = -1;
    {
      std::string_view h = trim(fields[6]);
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(h.data(), h.data() + h.size(), v);
      if (!h.empty() && ec == std::errc() && ptr == h.data() + h.size())
        head = static_cast<int>(v);
    }
    TokenQuartet tok;
    tok.form = fields[1];
    tok.lemma = fields[2] == "_" ? to_lower(fields[1]) : to_lower(fields[2]);
    tok.pos = fields[3];
    tok.dep_rel = fields[7];
    cur.tokens.push_back(std::move(tok));
    cur.heads.push_back(head);
  }
  flush();
  return out;
}

std::vector<ParsedSentence> parse_conllu(const std::filesystem::path& path) {
  return parse_conllu_text(read_file(path));
}

// ---------------------------------------------------------------------------
// Embeddings

EmbeddingTable parse_embeddings_text(std::string_view text,
                                     const WarningSink& warn) {
  EmbeddingTable table;
  std::size_t line_no = 0;
  bool first = true;
  for (auto raw : lines_of(text)) {
    ++line_no;
    auto parts = split_ws(raw);
    if (parts.empty()) continue;
    if (first) {
      first = false;
      double a = 0, b = 0;
      if (parts.size() == 2 && try_parse_double(parts[0], a) &&
          try_parse_double(parts[1], b) && a == std::floor(a) &&
          b == std::floor(b) && b > 0) {
        table.dimension = static_cast<int>(b);
        continue;
      }
    }
    const int dim = static_cast<int>(parts.size()) - 1;
    if (table.dimension == 0) {
      if (dim <= 0) {
        throw Error(ErrorKind::DimensionMismatch,
                    line_ctx(line_no) + ": record has no vector");
      }
      table.dimension = dim;
    }
    if (dim != table.dimension) {
      throw Error(ErrorKind::DimensionMismatch,
                  line_ctx(line_no) + ": expected " +
                      std::to_string(table.dimension) + " values, got " +
                      std::to_string(dim));
    }
    std::vector<double> vec(dim);
    for (int i = 0; i < dim; ++i) vec[i] = parse_double(parts[i + 1], line_ctx(line_no));
    std::string token(parts[0]);
    auto [it, inserted] = table.vectors.try_emplace(token, std::move(vec));
    if (!inserted) {
      if (warn) {
        warn(line_ctx(line_no) + ": duplicate token '" + token +
             "', keeping the later vector");
      }
      it->second = std::move(vec);
    }
  }
  if (table.dimension == 0) throw Error(ErrorKind::EmptyInput, "no embedding records");
  return table;
}

EmbeddingTable parse_embeddings(const std::filesystem::path& path,
                                const WarningSink& warn) {
  return parse_embeddings_text(read_file(path), warn);
}

// ---------------------------------------------------------------------------
// Timelines

namespace {

struct RawInterval {
  double start = 0, end = 0;
  std::string label;
  int syllables = 0;
  std::size_t row = 0;
};

IntervalKind kind_of(const std::string& label, std::size_t row) {
  if (label == "speech") return IntervalKind::Speech;
  if (label == "bp" || label == "lp") return IntervalKind::SilentPause;
  if (label == "fp") return IntervalKind::FilledPause;
  if (label == "$") return IntervalKind::Boundary;
  throw Error(ErrorKind::MalformedRow,
              "row " + std::to_string(row) + ": unknown interval kind '" + label + "'");
}

TranscriptTimeline build_timeline(const std::vector<RawInterval>& rows) {
  TranscriptTimeline tl;
  double prev_end = -std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    if (!(r.end > r.start)) {
      throw Error(ErrorKind::MalformedRow,
                  "row " + std::to_string(r.row) + ": end must exceed start");
    }
    if (r.start < prev_end) {
      throw Error(ErrorKind::OverlapError,
                  "row " + std::to_string(r.row) + ": starts at " +
                      format_double(r.start) + " before the previous interval ends at " +
                      format_double(prev_end));
    }
    prev_end = r.end;
    TimelineInterval iv{r.start, r.end, kind_of(r.label, r.row), r.syllables};
    if (iv.kind != IntervalKind::Speech && iv.syllables != 0) {
      throw Error(ErrorKind::MalformedRow,
                  "row " + std::to_string(r.row) + ": syllables on a non-speech interval");
    }
    if (iv.syllables < 0) {
      throw Error(ErrorKind::MalformedRow,
                  "row " + std::to_string(r.row) + ": negative syllable count");
    }
    tl.intervals.push_back(iv);
  }
  auto& iv = tl.intervals;
  std::size_t first_speech = iv.size();
  std::size_t last_speech = iv.size();
  for (std::size_t i = 0; i < iv.size(); ++i) {
    if (iv[i].kind == IntervalKind::Speech) {
      if (first_speech == iv.size()) first_speech = i;
      last_speech = i;
    }
  }
  for (std::size_t i = 0; i < iv.size(); ++i) {
    bool outside = first_speech == iv.size() || i < first_speech || i > last_speech;
    if (outside) {
      iv[i].kind = IntervalKind::Boundary;
    } else if (iv[i].kind == IntervalKind::Boundary) {
      throw Error(ErrorKind::MalformedRow,
                  "row " + std::to_string(rows[i].row) +
                      ": '$' boundary marker inside the response");
    }
  }
  return tl;
}

}  // namespace

TranscriptTimeline parse_timeline_text(std::string_view text) {
  std::vector<RawInterval> rows;
  std::size_t line_no = 0;
  for (auto raw : lines_of(text)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fields = split(raw, '\t');
    double probe = 0.0;
    if (rows.empty() && !try_parse_double(fields[0], probe)) continue;  // header
    if (fields.size() < 3) {
      throw Error(ErrorKind::MalformedRow,
                  "row " + std::to_string(line_no) + ": expected start_s, end_s, kind");
    }
    RawInterval r;
    r.row = line_no;
    r.start = parse_double(fields[0], "row " + std::to_string(line_no));
    r.end = parse_double(fields[1], "row " + std::to_string(line_no));
    r.label = to_lower(trim(fields[2]));
    if (fields.size() > 3 && !trim(fields[3]).empty()) {
      r.syllables = static_cast<int>(parse_int(fields[3], "row " + std::to_string(line_no)));
    }
    rows.push_back(std::move(r));
  }
  return build_timeline(rows);
}

TranscriptTimeline parse_timeline(const std::filesystem::path& path) {
  return parse_timeline_text(read_file(path));
}

std::string write_timeline(const TranscriptTimeline& timeline) {
  std::ostringstream out;
  out << "start_s\tend_s\tkind\tsyllables\n";
  for (const auto& iv : timeline.intervals) {
    const char* kind = iv.kind == IntervalKind::Speech        ? "speech"
                       : iv.kind == IntervalKind::SilentPause ? "lp"
                       : iv.kind == IntervalKind::FilledPause ? "fp"
                                                              : "$";
    out << format_double(iv.start_s) << '\t' << format_double(iv.end_s) << '\t'
        << kind << '\t';
    if (iv.kind == IntervalKind::Speech) out << iv.syllables;
    out << '\n';
  }
  return out.str();
}

TranscriptTimeline parse_textgrid_text(std::string_view text) {
  struct Tier {
    std::vector<RawInterval> intervals;
  };
  std::vector<Tier> tiers;
  RawInterval* cur = nullptr;
  std::size_t line_no = 0;
  auto value_of = [](std::string_view line) {
    auto eq = line.find('=');
    return trim(line.substr(eq + 1));
  };
  for (auto raw : lines_of(text)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.starts_with("item [") && !line.starts_with("item []") &&
        line.find("]:") != std::string_view::npos) {
      tiers.emplace_back();
      cur = nullptr;
    } else if (line.starts_with("intervals [") && !tiers.empty()) {
      tiers.back().intervals.emplace_back();
      cur = &tiers.back().intervals.back();
      cur->row = line_no;
    } else if (cur && line.starts_with("xmin")) {
      cur->start = parse_double(value_of(line), line_ctx(line_no));
    } else if (cur && line.starts_with("xmax")) {
      cur->end = parse_double(value_of(line), line_ctx(line_no));
    } else if (cur && line.starts_with("text")) {
      std::string_view v = value_of(line);
      if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
        v = v.substr(1, v.size() - 2);
      cur->label = to_lower(trim(v));
    }
  }
  if (tiers.empty()) throw Error(ErrorKind::MalformedRow, "TextGrid has no interval tier");

  std::vector<RawInterval> rows;
  for (const auto& iv : tiers[0].intervals) {
    RawInterval r = iv;
    if (r.label.empty()) {
      r.label = "lp";
    } else if (r.label != "bp" && r.label != "lp" && r.label != "fp" &&
               r.label != "$" && r.label != "speech") {
      r.label = "speech";  // transcribed words
    }
    rows.push_back(r);
  }
  if (tiers.size() > 1) {
    for (const auto& syl : tiers[1].intervals) {
      if (syl.label.empty()) continue;
      int count = static_cast<int>(parse_int(syl.label, "syllable tier row " +
                                                            std::to_string(syl.row)));
      double mid = 0.5 * (syl.start + syl.end);
      for (auto& r : rows) {
        if (r.label == "speech" && mid >= r.start && mid < r.end) {
          r.syllables += count;
          break;
        }
      }
    }
  }
  return build_timeline(rows);
}

// ---------------------------------------------------------------------------
// Rating lexicons

int rescale_rating(double v, double min, double max, int scale_points) {
  if (!(max > min) || scale_points < 2) {
    throw Error(ErrorKind::Precondition, "rating scale needs max > min and >= 2 points");
  }
  if (v < min || v > max) {
    throw Error(ErrorKind::OutOfRange, "raw rating " + format_double(v) +
                                           " outside [" + format_double(min) +
                                           ", " + format_double(max) + "]");
  }
  double scaled = 1.0 + (scale_points - 1) * (v - min) / (max - min);
  return static_cast<int>(std::round(scaled));
}

RatingLexicon parse_rating_lexicon_text(std::string_view text,
                                        RatingFactor factor, int scale_points,
                                        double raw_min, double raw_max,
                                        const WarningSink& warn) {
  RatingLexicon lex;
  lex.factor = factor;
  lex.scale_points = scale_points;
  std::size_t line_no = 0;
  bool first = true;
  for (auto raw : lines_of(text)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fields = split(raw, '\t');
    double v = 0.0;
    if (fields.size() < 2 || !try_parse_double(fields[1], v)) {
      if (first) {  // header row
        first = false;
        continue;
      }
      throw Error(ErrorKind::MalformedRow, line_ctx(line_no) + ": expected lemma<TAB>rating");
    }
    first = false;
    std::string lemma = to_lower(trim(fields[0]));
    int rating = 0;
    try {
      rating = rescale_rating(v, raw_min, raw_max, scale_points);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::OutOfRange) {
        throw Error(ErrorKind::OutOfRange, "lemma '" + lemma + "' (" +
                                               line_ctx(line_no) + "): raw rating " +
                                               format_double(v) + " outside [" +
                                               format_double(raw_min) + ", " +
                                               format_double(raw_max) + "]");
      }
      throw;
    }
    auto [it, inserted] = lex.entries.try_emplace(lemma, rating);
    if (!inserted) {
      if (warn) warn(line_ctx(line_no) + ": duplicate lemma '" + lemma + "', keeping the later rating");
      it->second = rating;
    }
  }
  return lex;
}

RatingLexicon parse_rating_lexicon(const std::filesystem::path& path,
                                   RatingFactor factor, int scale_points,
                                   double raw_min, double raw_max,
                                   const WarningSink& warn) {
  return parse_rating_lexicon_text(read_file(path), factor, scale_points,
                                   raw_min, raw_max, warn);
}

}  // namespace readlens::io
