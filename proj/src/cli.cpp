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

#include "readlens/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "readlens/corpus_io.hpp"
#include "readlens/error.hpp"
#include "readlens/feature_matrix.hpp"
#include "readlens/fluency.hpp"
#include "readlens/gaze_clean.hpp"
#include "readlens/gaze_features.hpp"
#include "readlens/learn.hpp"
#include "readlens/lingfeat.hpp"
#include "readlens/simsem.hpp"
#include "readlens/stats.hpp"

namespace readlens::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

// Raised for usage problems found after argument parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

void write_output(const std::string& path, const std::string& content, Streams& s) {
  if (path == "-") {
    s.out << content;
    return;
  }
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot write " + path);
  f << content;
}

void require_exists(const std::string& path, const std::string& what) {
  if (!fs::exists(path)) throw UsageError(what + " not found: " + path);
}

// Files named directly plus the matching files of named directories, sorted.
std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs,
                                    const std::set<std::string>& extensions) {
  if (inputs.empty()) throw UsageError("no input files given");
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    require_exists(in, "input");
    if (fs::is_directory(in)) {
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.is_regular_file() && extensions.count(e.path().extension().string()))
          files.push_back(e.path());
      }
    } else {
      files.emplace_back(in);
    }
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename() == b.filename() ? a < b : a.filename() < b.filename();
  });
  files.erase(std::unique(files.begin(), files.end()), files.end());
  return files;
}

std::map<std::string, std::string> parse_kv_list(const std::vector<std::string>& items) {
  std::map<std::string, std::string> kv;
  for (const auto& item : items) {
    for (const auto& part : io::split(item, ',')) {
      const auto eq = part.find('=');
      if (eq == std::string::npos) throw UsageError("expected key=value, got '" + part + "'");
      kv[std::string(io::trim(part.substr(0, eq)))] = std::string(io::trim(part.substr(eq + 1)));
    }
  }
  return kv;
}

bool parse_bool(const std::string& v, const std::string& key) {
  const auto l = io::to_lower(v);
  if (l == "true" || l == "1" || l == "yes" || l == "on") return true;
  if (l == "false" || l == "0" || l == "no" || l == "off") return false;
  throw UsageError("bad boolean for " + key + ": " + v);
}

// sample_id,label CSV with a header line.
std::map<std::string, std::string> read_labels(const std::string& path) {
  require_exists(path, "labels file");
  std::map<std::string, std::string> out;
  std::istringstream in(io::read_file(path));
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (io::trim(line).empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto f = io::split(std::string(io::trim(line)), ',');
    if (f.size() < 2) throw UsageError("labels file: bad line '" + line + "'");
    out[std::string(io::trim(f[0]))] = std::string(io::trim(f[1]));
  }
  return out;
}

// Per-input results filled in parallel, reported in input order.
template <typename T>
struct Slot {
  std::optional<T> value;
  std::string error;
};

template <typename T, typename Fn>
std::vector<Slot<T>> map_files(const std::vector<fs::path>& files, Fn fn) {
  std::vector<Slot<T>> slots(files.size());
  const auto n = static_cast<std::ptrdiff_t>(files.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      slots[i].value = fn(files[i]);
    } catch (const std::exception& e) {
      slots[i].error = e.what();
    }
  }
  return slots;
}

template <typename T>
int report_failures(const std::vector<fs::path>& files, const std::vector<Slot<T>>& slots,
                    Streams& s) {
  int failed = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!slots[i].value) {
      s.err << files[i].string() << ": " << slots[i].error << "\n";
      ++failed;
    }
  }
  return failed;
}

void attach_labels(FeatureMatrix& m, const std::string& labels_path) {
  if (labels_path.empty()) return;
  const auto labels = read_labels(labels_path);
  for (auto& r : m.rows) {
    auto it = labels.find(r.sample_id);
    if (it != labels.end()) r.label = it->second;
  }
}

// ---- gaze ----

struct GazeArgs {
  std::string layout;
  std::vector<std::string> inputs;
  std::string out = "-";
  std::vector<std::string> params;
  std::string overrides;
  bool aggregate = false;
  std::string elements_out;
};

gaze::CleanParams clean_params(const std::vector<std::string>& items) {
  gaze::CleanParams p;
  for (const auto& [k, v] : parse_kv_list(items)) {
    if (k == "min-fix-ms") p.min_fix_ms = static_cast<int>(io::parse_int(v, k));
    else if (k == "max-fix-ms") p.max_fix_ms = static_cast<int>(io::parse_int(v, k));
    else if (k == "isolation-gap") p.isolation_gap_words = static_cast<int>(io::parse_int(v, k));
    else if (k == "smoothing") p.smoothing_enabled = parse_bool(v, k);
    else throw UsageError("unknown cleaning parameter: " + k);
  }
  try {
    p.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return p;
}

int cmd_gaze(const GazeArgs& a, Streams& s) {
  if (!fs::exists(a.layout)) throw UsageError("layout not found: " + a.layout);
  const auto params = clean_params(a.params);
  if (!a.overrides.empty()) require_exists(a.overrides, "overrides directory");
  std::string elements_out = a.elements_out;
  if (a.aggregate && elements_out.empty()) {
    if (a.out == "-") throw UsageError("--aggregate-by-element needs --elements-out when writing to stdout");
    fs::path p(a.out);
    elements_out = (p.parent_path() / (p.stem().string() + "_elements.csv")).string();
  }
  const auto files = expand_inputs(a.inputs, {".csv"});
  AoiLayout layout;
  try {
    layout = io::parse_aoi_layout(a.layout);
  } catch (const Error& e) {
    throw UsageError(std::string("layout: ") + e.what());
  }

  auto slots = map_files<gaze::CleanedTrace>(files, [&](const fs::path& f) {
    const auto trace = io::parse_gaze_log(f);
    gaze::Overrides ov;
    if (!a.overrides.empty()) {
      const auto op = fs::path(a.overrides) / (f.stem().string() + ".tsv");
      if (fs::exists(op)) ov = gaze::parse_overrides(op);
    }
    return gaze::clean_trace(trace, layout, params, ov);
  });
  const int failed = report_failures(files, slots, s);
  std::vector<gaze::CleanedTrace> traces;
  for (auto& sl : slots)
    if (sl.value) traces.push_back(std::move(*sl.value));

  write_output(a.out, write_matrix_csv(gaze::build_matrix(traces, layout)), s);
  if (a.aggregate)
    write_output(elements_out, gaze::write_element_csv(gaze::aggregate_by_element(traces, layout)), s);
  return failed ? kPartial : kOk;
}

// ---- select / train / eval ----

FeatureMatrix load_labeled(const std::string& path) {
  require_exists(path, "matrix");
  auto m = read_matrix_csv(path);
  if (m.size() == 0) throw UsageError("matrix has no rows: " + path);
  if (!m.all_labeled()) throw UsageError("matrix has unlabeled rows: " + path);
  return m;
}

struct SelectArgs {
  std::string matrix;
  double alpha = 0.01;
  std::string out = "-";
};

int cmd_select(const SelectArgs& a, Streams& s) {
  if (!(a.alpha > 0 && a.alpha < 1)) throw UsageError("alpha must lie in (0, 1)");
  const auto m = load_labeled(a.matrix);
  const auto z = stats::zscore_fit_apply(m);
  const auto cols = stats::select_features(z, a.alpha);
  s.err << "selected " << cols.size() << " of " << m.cols() << " features\n";
  write_output(a.out, stats::write_selection(m, cols), s);
  return kOk;
}

struct TrainArgs {
  std::string matrix;
  std::string selection;
  std::string model_out;
  std::uint64_t seed = 0;
  double train_fraction = 0.7;
  int folds = 5;
  double c = 1.0;
  double tolerance = 1e-3;
  int max_iters = 1000;
  bool score = false;
};

FeatureMatrix apply_selection(const FeatureMatrix& m, const std::string& selection) {
  if (selection.empty()) return m;
  require_exists(selection, "selection file");
  return m.select_columns(stats::parse_selection(io::read_file(selection), m));
}

int cmd_train(const TrainArgs& a, Streams& s) {
  const auto m = apply_selection(load_labeled(a.matrix), a.selection);
  learn::SplitSpec spec{a.train_fraction, a.folds, a.seed};
  try {
    spec.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const learn::TrainMeta meta{a.c, a.tolerance, a.max_iters};
  auto [train, test] = learn::split(m, spec, !a.score);
  const auto z = stats::zscore_fit(train);
  train = stats::zscore_apply(train, z);
  auto model = a.score ? learn::train_regressor(train, learn::numeric_labels(train), meta)
                       : learn::train_classifier(train, meta);
  model.zscore = z;
  model.seed = a.seed;
  model.train_fraction = a.train_fraction;
  model.folds = a.folds;
  write_output(a.model_out, learn::write_model(model), s);
  s.err << "trained on " << train.size() << " rows, " << train.cols() << " features\n";
  return kOk;
}

struct EvalArgs {
  std::string matrix;
  std::string model;
  std::string out = "-";
  int categories = 0;
};

int cmd_eval(const EvalArgs& a, Streams& s) {
  require_exists(a.model, "model");
  const auto model = learn::read_model(a.model);
  const auto full = load_labeled(a.matrix);
  std::vector<std::size_t> cols;
  for (const auto& name : model.feature_names) {
    auto it = std::find(full.feature_names.begin(), full.feature_names.end(), name);
    if (it == full.feature_names.end())
      throw Error(ErrorKind::DimensionMismatch, "matrix lacks model feature " + name);
    cols.push_back(static_cast<std::size_t>(it - full.feature_names.begin()));
  }
  const auto m = full.select_columns(cols);
  const bool classify = model.kind == learn::ModelKind::Classifier;
  const learn::SplitSpec spec{model.train_fraction, model.folds, model.seed};
  auto [train, test] = learn::split(m, spec, classify);
  if (model.zscore) test = stats::zscore_apply(test, *model.zscore);

  ordered_json j;
  j["kind"] = classify ? "classifier" : "regressor";
  j["seed"] = model.seed;
  j["features"] = m.cols();
  j["n_train"] = train.size();
  j["n_test"] = test.size();
  if (classify) {
    const auto pred = learn::predict_labels(model, test);
    const auto truth = learn::string_labels(test);
    const auto cv = learn::cross_validate_classifier(m, spec, model.meta, {true, false});
    j["c_rate"] = learn::c_rate(pred, truth);
    j["uar"] = learn::uar(pred, truth);
    j["cv_accuracy"] = cv.mean;
    j["cv_folds"] = cv.per_fold;
  } else {
    const auto raw = learn::predict_values(model, test);
    const auto truth = learn::numeric_labels(test);
    std::vector<double> rounded;
    std::vector<int> pi, ti;
    int k = a.categories;
    for (double t : truth) k = std::max(k, static_cast<int>(std::lround(t)));
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const int p = std::clamp(learn::round_score(raw[i]), 1, std::max(k, 1));
      rounded.push_back(p);
      pi.push_back(p);
      ti.push_back(static_cast<int>(std::lround(truth[i])));
    }
    const auto cv = learn::cross_validate_regressor(m, spec, model.meta, {true, true});
    j["rmse"] = learn::rmse(rounded, truth);
    j["cv_rmse"] = cv.mean;
    j["cv_folds"] = cv.per_fold;
    j["qwk"] = stats::qwk(pi, ti, k);
  }
  write_output(a.out, j.dump(2) + "\n", s);
  return kOk;
}

// ---- simscore ----

struct SimArgs {
  std::string reference;
  std::vector<std::string> summaries;
  std::string resources;
  std::vector<std::string> sources;
  std::string taxonomy;
  std::string unit = "sentence";
  double threshold = 0.7;
  std::string reference_parse;
  std::string parses;
  bool no_parses = false;
  std::string out_dir;
  std::string batch_csv = "-";
  std::string against_ratings;
  int categories = 0;
};

// Upper bound of the overall score: TLS < 1, TSS <= 2, TCS <= 3.
constexpr double kOverallMax = 6.0;

std::vector<simsem::SimilaritySource> load_sources(const SimArgs& a, Streams& s) {
  if (a.sources.empty()) throw UsageError("at least one --source is required");
  std::vector<simsem::SimilaritySource> out;
  for (const auto& spec : a.sources) {
    simsem::SimilaritySource src;
    if (spec.rfind("embedding:", 0) == 0) {
      const std::string path = spec.substr(10);
      require_exists(path, "embedding file");
      src.kind = simsem::SourceKind::Embedding;
      src.embedding = std::make_shared<EmbeddingTable>(io::parse_embeddings(
          path, [&](const std::string& w) { s.err << "warning: " << w << "\n"; }));
    } else if (spec == "wordnet-path") {
      if (a.taxonomy.empty()) throw UsageError("--source wordnet-path needs --taxonomy");
      require_exists(a.taxonomy, "taxonomy directory");
      src.kind = simsem::SourceKind::TaxonomyPath;
      src.taxonomy = std::make_shared<simsem::Taxonomy>(simsem::Taxonomy::load(a.taxonomy));
    } else if (spec == "levenshtein") {
      src.kind = simsem::SourceKind::Levenshtein;
    } else {
      throw UsageError("unknown source: " + spec);
    }
    out.push_back(std::move(src));
  }
  return out;
}

bool has_element_markers(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto t = io::trim(line);
    if (t.size() > 2 && t.front() == '[' && t.back() == ']') return true;
  }
  return false;
}

struct Scored {
  std::string name;
  simsem::SimilarityReport report;
};

int cmd_simscore(const SimArgs& a, Streams& s) {
  require_exists(a.reference, "reference");
  if (a.unit != "sentence" && a.unit != "text") throw UsageError("--unit must be sentence or text");
  if (!(a.threshold > 0 && a.threshold <= 1)) throw UsageError("threshold must lie in (0, 1]");
  const bool need_parses = !a.no_parses;
  if (need_parses) {
    if (a.reference_parse.empty()) throw UsageError("--reference-parse is required (or --no-parses)");
    require_exists(a.reference_parse, "reference parse");
    if (a.parses.empty()) throw UsageError("--parses is required (or --no-parses)");
    require_exists(a.parses, "parses directory");
  }
  const auto sources = load_sources(a, s);
  simsem::PreprocessResources res;
  if (!a.resources.empty()) {
    require_exists(a.resources, "resources directory");
    res = simsem::load_resources(a.resources);
  }
  const auto files = expand_inputs(a.summaries, {".txt"});

  const std::string ref_text = io::read_file(a.reference);
  std::vector<ParsedSentence> ref_parse;
  if (need_parses) ref_parse = io::parse_conllu(a.reference_parse);
  const auto ref = simsem::make_document(ref_text, res, need_parses ? &ref_parse : nullptr,
                                         has_element_markers(ref_text));
  const auto scorer = simsem::make_scorer(sources);
  simsem::SimOptions opts;
  opts.threshold = a.threshold;
  opts.unit = a.unit == "text" ? simsem::PairingUnit::Text : simsem::PairingUnit::Sentence;
  opts.require_parses = need_parses;

  std::vector<std::string> lacking;
  std::vector<fs::path> todo;
  for (const auto& f : files) {
    if (need_parses && !fs::exists(fs::path(a.parses) / (f.stem().string() + ".conllu")))
      lacking.push_back(f.filename().string());
    else
      todo.push_back(f);
  }
  if (!lacking.empty()) {
    s.err << "summaries lacking parses:";
    for (const auto& n : lacking) s.err << " " << n;
    s.err << "\n";
  }

  auto slots = map_files<simsem::SimilarityReport>(todo, [&](const fs::path& f) {
    std::vector<ParsedSentence> parse;
    if (need_parses) parse = io::parse_conllu(fs::path(a.parses) / (f.stem().string() + ".conllu"));
    const auto doc = simsem::make_document(io::read_file(f), res,
                                           need_parses ? &parse : nullptr, false);
    return simsem::score(ref, doc, scorer, opts);
  });
  const int failed = report_failures(todo, slots, s);

  std::vector<Scored> scored;
  for (std::size_t i = 0; i < todo.size(); ++i)
    if (slots[i].value) scored.push_back({todo[i].stem().string(), std::move(*slots[i].value)});

  if (!a.out_dir.empty()) {
    for (const auto& sc : scored)
      write_output((fs::path(a.out_dir) / (sc.name + ".json")).string(),
                   simsem::report_json(sc.report), s);
  }
  std::ostringstream csv;
  csv << "summary,tls,tss,tcs,overall\n";
  for (const auto& sc : scored) {
    csv << sc.name << "," << io::format_double(sc.report.tls) << ","
        << io::format_double(sc.report.tss) << "," << io::format_double(sc.report.tcs) << ","
        << io::format_double(sc.report.overall) << "\n";
  }
  write_output(a.batch_csv, csv.str(), s);

  if (!a.against_ratings.empty()) {
    require_exists(a.against_ratings, "ratings file");
    std::map<std::string, double> ratings;
    for (const auto& [k, v] : read_labels(a.against_ratings))
      ratings[fs::path(k).stem().string()] = io::parse_double(v, "rating for " + k);
    std::vector<double> x, y;
    for (const auto& sc : scored) {
      auto it = ratings.find(sc.name);
      if (it == ratings.end()) continue;
      x.push_back(sc.report.overall);
      y.push_back(it->second);
    }
    if (x.size() < 3) throw Error(ErrorKind::TooFewSamples, "fewer than 3 rated summaries");
    int k = a.categories;
    std::vector<int> rx, ry;
    for (double v : y) k = std::max(k, static_cast<int>(std::lround(v)));
    for (std::size_t i = 0; i < x.size(); ++i) {
      rx.push_back(io::rescale_rating(std::clamp(x[i], 0.0, kOverallMax), 0.0, kOverallMax, k));
      ry.push_back(static_cast<int>(std::lround(y[i])));
    }
    const auto [r, p] = stats::pearson_test(x, y);
    ordered_json j;
    j["n"] = x.size();
    j["pearson"] = r;
    j["pearson_p"] = p;
    j["spearman"] = stats::spearman(x, y);
    j["qwk"] = stats::qwk(rx, ry, k);
    s.out << j.dump(2) << "\n";
  }
  return (failed || !lacking.empty()) ? kPartial : kOk;
}

// ---- lingfeat / fluency ----

struct LingArgs {
  std::vector<std::string> inputs;
  std::string out = "-";
  std::string easy_words;
  std::vector<std::string> ratings;
  std::vector<std::string> rating_ranges;
  std::string labels;
};

RatingFactor factor_by_name(const std::string& name) {
  for (auto f : kAllFactors)
    if (name == factor_name(f)) return f;
  throw UsageError("unknown rating factor: " + name);
}

FeatureMatrix assemble(const std::vector<fs::path>& files,
                       const std::vector<Slot<lingfeat::FeatureRow>>& slots) {
  FeatureMatrix m;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!slots[i].value) continue;
    if (m.feature_names.empty()) m.feature_names = slots[i].value->names;
    m.rows.push_back({files[i].stem().string(), std::nullopt, slots[i].value->values});
  }
  return m;
}

int cmd_lingfeat(const LingArgs& a, Streams& s) {
  std::set<std::string> easy;
  if (!a.easy_words.empty()) {
    require_exists(a.easy_words, "easy-word list");
    std::istringstream in(io::read_file(a.easy_words));
    std::string w;
    while (in >> w) easy.insert(io::to_lower(w));
  }
  std::map<std::string, std::pair<double, double>> ranges;
  for (const auto& [k, v] : parse_kv_list(a.rating_ranges)) {
    const auto lohi = io::split(v, ':');
    if (lohi.size() != 2) throw UsageError("rating range must be LO:HI, got " + v);
    ranges[k] = {io::parse_double(lohi[0], k), io::parse_double(lohi[1], k)};
  }
  std::vector<RatingLexicon> lexicons;
  for (const auto& [k, path] : parse_kv_list(a.ratings)) {
    const auto factor = factor_by_name(k);
    require_exists(path, "rating lexicon");
    const auto range = ranges.count(k) ? ranges[k] : std::pair<double, double>{1.0, 9.0};
    lexicons.push_back(io::parse_rating_lexicon(
        path, factor, 9, range.first, range.second,
        [&](const std::string& w) { s.err << "warning: " << w << "\n"; }));
  }
  const auto files = expand_inputs(a.inputs, {".txt"});
  const auto slots = map_files<lingfeat::FeatureRow>(files, [&](const fs::path& f) {
    return lingfeat::text_features(io::read_file(f), a.easy_words.empty() ? nullptr : &easy,
                                   lexicons);
  });
  const int failed = report_failures(files, slots, s);
  auto m = assemble(files, slots);
  attach_labels(m, a.labels);
  write_output(a.out, write_matrix_csv(m), s);
  return failed ? kPartial : kOk;
}

struct FluencyArgs {
  std::vector<std::string> inputs;
  std::string out = "-";
  double min_pause = 0.25;
  std::string labels;
};

int cmd_fluency(const FluencyArgs& a, Streams& s) {
  if (!(a.min_pause > 0)) throw UsageError("--min-pause must be positive");
  const auto files = expand_inputs(a.inputs, {".tsv", ".TextGrid"});
  const auto slots = map_files<lingfeat::FeatureRow>(files, [&](const fs::path& f) {
    const auto timeline = f.extension() == ".TextGrid"
                              ? io::parse_textgrid_text(io::read_file(f))
                              : io::parse_timeline(f);
    lingfeat::FeatureRow row;
    row.names.assign(fluency::kFeatureNames.begin(), fluency::kFeatureNames.end());
    row.values = fluency::as_row(fluency::fluency_features(timeline, a.min_pause));
    return row;
  });
  const int failed = report_failures(files, slots, s);
  auto m = assemble(files, slots);
  if (m.feature_names.empty())
    m.feature_names.assign(fluency::kFeatureNames.begin(), fluency::kFeatureNames.end());
  attach_labels(m, a.labels);
  write_output(a.out, write_matrix_csv(m), s);
  return failed ? kPartial : kOk;
}

bool is_usage_kind(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonBinaryLabels:
    case ErrorKind::Precondition:
    case ErrorKind::MissingResource:
    case ErrorKind::NoLayout:
    case ErrorKind::Io:
      return true;
    default:
      return false;
  }
}

// Injects config values as flags of the chosen subcommand unless the command
// line already sets them.
void apply_config(CLI::App& app, std::vector<std::string>& args, const std::string& path) {
  require_exists(path, "config file");
  auto it = std::find_if(args.begin(), args.end(), [&](const std::string& a) {
    return app.get_subcommand_no_throw(a) != nullptr;
  });
  if (it == args.end()) return;
  CLI::App* sub = app.get_subcommand(*it);
  std::vector<std::string> extra;
  for (const auto& [key, value] : parse_config_text(io::read_file(path))) {
    const std::string flag = "--" + key;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given) continue;
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (opt == nullptr) continue;  // shared config files carry keys of other commands
    if (opt->get_type_size() == 0) {
      if (parse_bool(value, key)) extra.push_back(flag);
    } else {
      extra.push_back(flag);
      extra.push_back(value);
    }
  }
  args.insert(it + 1, extra.begin(), extra.end());
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto t = io::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos)
      throw UsageError("config line " + std::to_string(n) + ": expected key=value");
    out.emplace_back(std::string(io::trim(t.substr(0, eq))),
                     std::string(io::trim(t.substr(eq + 1))));
  }
  return out;
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  Streams s{out, err};
  CLI::App app{"Reading-comprehension feature extraction and scoring", "readlens"};
  app.require_subcommand(1);
  std::string config;
  app.add_option("--config", config, "Flat key=value file; flags on the command line win");

  GazeArgs ga;
  auto* gaze = app.add_subcommand("gaze", "Clean gaze traces and extract AoI features");
  gaze->add_option("inputs", ga.inputs, "Gaze CSV files or directories")->required();
  gaze->add_option("--layout", ga.layout, "AoI layout JSON")->required();
  gaze->add_option("-o,--out", ga.out, "Feature matrix CSV")->capture_default_str();
  gaze->add_option("--params", ga.params,
                   "Cleaning parameters: min-fix-ms=50 max-fix-ms=1000 isolation-gap=2 "
                   "smoothing=true");
  gaze->add_option("--overrides", ga.overrides, "Directory of <trace>.tsv fixation overrides");
  gaze->add_flag("--aggregate-by-element", ga.aggregate,
                 "Also write per-element feature means and SDs");
  gaze->add_option("--elements-out", ga.elements_out,
                   "Element table path (default: <out>_elements.csv)");

  SelectArgs sa;
  auto* select = app.add_subcommand("select", "Welch t-test feature selection");
  select->add_option("--matrix", sa.matrix, "Labeled feature matrix CSV")->required();
  select->add_option("--alpha", sa.alpha, "Keep features with p below alpha")
      ->capture_default_str();
  select->add_option("-o,--out", sa.out, "Selected feature names")->capture_default_str();

  TrainArgs ta;
  auto* train = app.add_subcommand("train", "Fit a linear model on a seeded train split");
  train->add_option("--matrix", ta.matrix, "Labeled feature matrix CSV")->required();
  train->add_option("--selection", ta.selection, "Feature names to keep");
  train->add_option("--model-out", ta.model_out, "Model JSON")->required();
  train->add_option("--seed", ta.seed, "Split and fold seed")->capture_default_str();
  train->add_option("--train-fraction", ta.train_fraction)->capture_default_str();
  train->add_option("--folds", ta.folds, "Folds for cross-validation at eval")
      ->capture_default_str();
  train->add_option("--c", ta.c, "Inverse regularization strength")->capture_default_str();
  train->add_option("--tolerance", ta.tolerance)->capture_default_str();
  train->add_option("--max-iters", ta.max_iters)->capture_default_str();
  train->add_flag("--score", ta.score, "Regress numeric scores instead of classifying");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Held-out and cross-validated metrics as JSON");
  eval->add_option("--matrix", ea.matrix, "Matrix the model was trained from")->required();
  eval->add_option("--model", ea.model, "Model JSON")->required();
  eval->add_option("-o,--out", ea.out, "Metrics JSON")->capture_default_str();
  eval->add_option("--categories", ea.categories,
                   "Score categories for QWK (default: largest label)");

  SimArgs ma;
  auto* sim = app.add_subcommand("simscore", "Score summaries against a reference text");
  sim->add_option("summaries", ma.summaries, "Summary .txt files or directories")->required();
  sim->add_option("--reference", ma.reference, "Reference text")->required();
  sim->add_option("--resources", ma.resources,
                  "Directory with stopwords.txt, lemmas.tsv, phrases.txt, substitutions.tsv");
  sim->add_option("--source", ma.sources,
                  "embedding:FILE, wordnet-path or levenshtein; repeat to chain")
      ->required();
  sim->add_option("--taxonomy", ma.taxonomy, "Taxonomy directory for wordnet-path");
  sim->add_option("--unit", ma.unit, "sentence or text")->capture_default_str();
  sim->add_option("--threshold", ma.threshold)->capture_default_str();
  sim->add_option("--reference-parse", ma.reference_parse, "CoNLL-U parse of the reference");
  sim->add_option("--parses", ma.parses, "Directory of <summary>.conllu parses");
  sim->add_flag("--no-parses", ma.no_parses, "Score without dependency parses");
  sim->add_option("--out-dir", ma.out_dir, "Directory for per-summary report JSON");
  sim->add_option("--batch-csv", ma.batch_csv, "Batch score table")->capture_default_str();
  sim->add_option("--against-ratings", ma.against_ratings,
                  "summary,score CSV; prints pearson, spearman and qwk");
  sim->add_option("--categories", ma.categories,
                  "Rating categories for QWK (default: largest rating)");

  LingArgs la;
  auto* ling = app.add_subcommand("lingfeat", "Readability, lexical variation and rating bins");
  ling->add_option("inputs", la.inputs, "Text files or directories")->required();
  ling->add_option("-o,--out", la.out)->capture_default_str();
  ling->add_option("--easy-words", la.easy_words, "Easy-word list enabling Dale-Chall");
  ling->add_option("--rating", la.ratings, "factor=PATH rating lexicon, e.g. imagery=img.tsv");
  ling->add_option("--rating-range", la.rating_ranges, "factor=LO:HI raw scale (default 1:9)");
  ling->add_option("--labels", la.labels, "sample_id,label CSV");

  FluencyArgs fa;
  auto* flu = app.add_subcommand("fluency", "Temporal fluency features of spoken responses");
  flu->add_option("inputs", fa.inputs, "Timeline .tsv / .TextGrid files or directories")
      ->required();
  flu->add_option("-o,--out", fa.out)->capture_default_str();
  flu->add_option("--min-pause", fa.min_pause, "Shortest counted silent pause (s)")
      ->capture_default_str();
  flu->add_option("--labels", fa.labels, "sample_id,label CSV");

  try {
    auto cfg = std::find(args.begin(), args.end(), "--config");
    if (cfg != args.end() && cfg + 1 != args.end()) {
      const std::string path = *(cfg + 1);
      args.erase(cfg, cfg + 2);
      apply_config(app, args, path);
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  } catch (const std::exception& e) {
    err << "readlens: " << e.what() << "\n";
    return kUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "gaze") return cmd_gaze(ga, s);
    if (name == "select") return cmd_select(sa, s);
    if (name == "train") return cmd_train(ta, s);
    if (name == "eval") return cmd_eval(ea, s);
    if (name == "simscore") return cmd_simscore(ma, s);
    if (name == "lingfeat") return cmd_lingfeat(la, s);
    if (name == "fluency") return cmd_fluency(fa, s);
  } catch (const UsageError& e) {
    err << "readlens " << name << ": " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "readlens " << name << ": " << e.what() << "\n";
    return is_usage_kind(e.kind()) ? kUsage : kPartial;
  } catch (const std::exception& e) {
    err << "readlens " << name << ": " << e.what() << "\n";
    return kPartial;
  }
  return kUsage;
}

}  // namespace readlens::cli
