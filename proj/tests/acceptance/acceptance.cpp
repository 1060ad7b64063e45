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

// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 when
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "generators.hpp"
#include "golden.hpp"
#include "oracles.hpp"
#include "readlens/alignment.hpp"
#include "readlens/cli.hpp"
#include "readlens/corpus_io.hpp"
#include "readlens/fluency.hpp"
#include "readlens/gaze_clean.hpp"
#include "readlens/gaze_features.hpp"
#include "readlens/learn.hpp"
#include "readlens/lingfeat.hpp"
#include "readlens/simsem.hpp"
#include "readlens/stats.hpp"

namespace {

using namespace readlens;
using Clock = std::chrono::steady_clock;

// Pinned tolerances.
constexpr double kTlsTarget = 0.82, kTlsTol = 0.005;
constexpr double kTssTarget = 1.8, kTssTol = 0.05;
constexpr double kConceptTarget = 0.54, kConceptTol = 0.005;
constexpr double kNormalizedTarget = 0.77, kNormalizedTol = 0.005;
constexpr double kTcsTarget = 1.31, kTcsTol = 0.01;
constexpr double kOverallTarget = 3.93, kOverallTol = 0.06;
constexpr double kGoldenSeconds = 1.0;
constexpr double kGazeSeconds = 30.0;
constexpr double kOracleTol = 1e-6;
constexpr double kFreTarget = 119.19, kFreTol = 0.01;
constexpr double kChanceLow = 0.35, kChanceHigh = 0.65;

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string num(double v, const char* fmt = "%.4f") {
  char buf[32];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

bool near(double v, double target, double tol) { return std::abs(v - target) <= tol; }

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Outcome golden_fixture() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto dir = testing::golden_dir();
  const auto res = simsem::load_resources(dir / "resources");
  const auto ref_parse = io::parse_conllu(dir / "reference.conllu");
  const auto sum_parse = io::parse_conllu(dir / "parses" / "line2.conllu");
  const auto ref = simsem::make_document(io::read_file(dir / "reference.txt"), res, &ref_parse);
  const auto sum =
      simsem::make_document(io::read_file(dir / "summaries" / "line2.txt"), res, &sum_parse);
  simsem::SimOptions opts;
  opts.unit = simsem::PairingUnit::Text;
  const auto r = simsem::score(ref, sum, testing::table_similarity, opts);
  const double elapsed = seconds_since(t0);

  o.check(near(r.tls, kTlsTarget, kTlsTol), "TLS " + num(r.tls) + " vs " + num(kTlsTarget));
  o.check(r.syntax && r.syntax->mdd1 == 1.0 && r.syntax->mdd2 == 1.0, "MDD not 1.0");
  o.check(near(r.tss, kTssTarget, kTssTol), "TSS " + num(r.tss));
  o.check(near(r.concepts.concept_score, kConceptTarget, kConceptTol),
          "concept " + num(r.concepts.concept_score));
  o.check(r.concepts.alignment == 10.0, "alignment " + num(r.concepts.alignment));
  o.check(near(r.concepts.normalized, kNormalizedTarget, kNormalizedTol),
          "normalized " + num(r.concepts.normalized));
  o.check(near(r.tcs, kTcsTarget, kTcsTol), "TCS " + num(r.tcs));
  o.check(near(r.overall, kOverallTarget, kOverallTol), "overall " + num(r.overall));
  o.check(elapsed < kGoldenSeconds, "took " + num(elapsed) + " s");
  if (o.pass) o.detail = "overall " + num(r.overall);
  return o;
}

Outcome levenshtein_column() {
  Outcome o;
  const std::vector<simsem::SimilaritySource> lev{simsem::SimilaritySource{}};
  for (const auto& row : testing::levenshtein_table()) {
    const double v = simsem::word_similarity(row.a, row.b, lev);
    o.check(std::round(v * 100) / 100 == row.value, row.a + "/" + row.b + " " + num(v));
  }
  if (o.pass) o.detail = std::to_string(testing::levenshtein_table().size()) + " pairs";
  return o;
}

Outcome number_rule() {
  Outcome o;
  const std::vector<simsem::SimilaritySource> lev{simsem::SimilaritySource{}};
  o.check(simsem::word_similarity("1829", "1829", lev) == 1.0, "1829/1829 not 1");
  o.check(simsem::word_similarity("1829", "1830", lev) == 0.0, "1829/1830 not 0");
  return o;
}

Outcome gaze_geometry() {
  Outcome o;
  const auto s1 = testing::make_layout({718, 69, 30, 7, 5, 12});
  const auto s2 = testing::make_layout({662, 66, 35, 6, 5, 12});
  o.check(gaze::feature_column_count(s1) == 7490,
          "session 1 columns " + std::to_string(gaze::feature_column_count(s1)));
  o.check(gaze::feature_column_count(s2) == 7120,
          "session 2 columns " + std::to_string(gaze::feature_column_count(s2)));

  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  const gaze::CleanParams params;
  int bad = 0;
  for (int i = 0; i < 100; ++i) {
    const auto& layout = i % 2 ? s2 : s1;
    const auto once = gaze::clean_trace(testing::make_trace(layout, rng), layout, params);
    bool ok = gaze::clean_trace(once.trace, layout, params) == once;
    for (const auto& f : once.fixations) {
      const auto& w = layout.words.at(f.word_index);
      ok = ok && w.slide == f.slide && w.line == f.line &&
           f.event.duration_ms >= params.min_fix_ms && f.event.duration_ms <= params.max_fix_ms;
    }
    for (const auto& f : gaze::word_fixation_features(once, layout)) {
      if (f.tFC > 0) ok = ok && std::abs(f.aFD * f.tFC - f.tFD) <= 1e-9 * f.tFD;
      ok = ok && f.FFD + f.SFD + f.LFD <= f.tFD + 1e-9;
    }
    const auto sacc = gaze::classify_saccades(once);
    for (const auto& span : layout.level_spans(AoiLevel::Sentence)) {
      const auto s = gaze::saccade_features(span, sacc);
      double sum = 0;
      for (const auto& sc : sacc)
        if (sc.direction == gaze::Direction::Forward && span.contains(sc.landing_word))
          sum += sc.landing_word - sc.launch_word;
      ok = ok && std::abs(s.rS + s.sS - sum) <= 1e-9 * std::max(1.0, sum);
    }
    ok = ok && gaze::trace_feature_row(once, layout).size() == gaze::feature_column_count(layout);
    if (!ok) ++bad;
  }
  const double elapsed = seconds_since(t0);
  o.check(bad == 0, std::to_string(bad) + " of 100 traces broke an invariant");
  o.check(elapsed < kGazeSeconds, "took " + num(elapsed) + " s");
  if (o.pass) o.detail = "7490/7120 columns, 100 traces in " + num(elapsed) + " s";
  return o;
}

Outcome stats_oracles() {
  Outcome o;
  std::mt19937_64 rng(99);
  double worst = 0;
  auto track = [&](double a, double b) { worst = std::max(worst, std::abs(a - b)); };
  std::uniform_int_distribution<int> size(5, 40), rating(1, 5);
  std::uniform_real_distribution<double> tv(-8, 8), dfv(1, 60);
  for (int i = 0; i < 50; ++i) {
    const auto a = testing::draw(rng, size(rng), 0.0, 1.0);
    const auto b = testing::draw(rng, size(rng), 0.5, 2.0);
    const auto w = stats::welch_t(a, b);
    const auto wo = testing::welch_oracle(a, b);
    track(w.t, wo.t);
    track(w.df, wo.df);
    track(w.p, wo.p);

    const auto x = testing::draw(rng, size(rng), 1.0, 3.0);
    auto y = x;
    for (auto& v : y) v = 0.5 * v + std::normal_distribution<double>(0, 1)(rng);
    track(stats::pearson(x, y), testing::pearson_oracle(x, y));
    track(stats::spearman(x, y),
          testing::pearson_oracle(testing::rank_oracle(x), testing::rank_oracle(y)));

    std::vector<int> ra(size(rng)), rb(ra.size());
    for (std::size_t k = 0; k < ra.size(); ++k) {
      ra[k] = rating(rng);
      rb[k] = std::clamp(ra[k] + std::uniform_int_distribution<int>(-2, 2)(rng), 1, 5);
    }
    track(stats::qwk(ra, rb, 5), testing::qwk_oracle(ra, rb));

    const double t = tv(rng), df = dfv(rng);
    track(stats::t_two_sided_p(t, df), testing::boost_p(t, df));
  }
  o.check(worst <= kOracleTol, "max deviation " + num(worst, "%.1e"));
  std::vector<int> a{1, 2, 3, 4, 5, 3, 2};
  o.check(stats::qwk(a, a, 5) == 1.0, "qwk(a, a) != 1");
  const std::vector<int> up{1, 2}, down{2, 1};
  o.check(std::abs(stats::qwk(up, down, 2) + 1.0) <= 1e-12, "reversal not -1");
  if (o.pass) o.detail = "max deviation " + num(worst, "%.1e");
  return o;
}

Outcome alignment_exhaustive() {
  Outcome o;
  const auto seqs = testing::all_sequences(5, 3);
  o.check(seqs.size() == 364, "sequence count " + std::to_string(seqs.size()));
  std::size_t mismatches = 0;
  for (const auto& a : seqs)
    for (const auto& b : seqs)
      if (needleman_wunsch(a, b) != testing::exhaustive_alignment(a, b)) ++mismatches;
  o.check(mismatches == 0, std::to_string(mismatches) + " mismatching pairs");
  if (o.pass) o.detail = std::to_string(seqs.size() * seqs.size()) + " pairs";
  return o;
}

// Fold loop written out here so accuracy and UAR come from the same folds.
std::pair<double, double> cv_accuracy_uar(const FeatureMatrix& m, std::uint64_t seed) {
  const learn::SplitSpec spec{0.7, 5, seed};
  const auto labels = learn::string_labels(m);
  const auto folds = learn::kfold_indices(labels, spec);
  double acc = 0, rec = 0;
  for (const auto& test : folds) {
    learn::Indices train;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (!std::binary_search(test.begin(), test.end(), i)) train.push_back(i);
    const auto tr = m.select_rows(train);
    const auto z = stats::zscore_fit(tr);
    const auto model = learn::train_classifier(stats::zscore_apply(tr, z));
    const auto te = m.select_rows(test);
    const auto pred = learn::predict_labels(model, stats::zscore_apply(te, z));
    const auto truth = learn::string_labels(te);
    acc += learn::c_rate(pred, truth);
    rec += learn::uar(pred, truth);
  }
  return {acc / folds.size(), rec / folds.size()};
}

Outcome learn_checks() {
  Outcome o;
  const auto m = testing::make_separable(200, 20, 1.0, 5);
  const auto [acc, rec] = cv_accuracy_uar(m, 5);
  o.check(acc == 1.0, "separable CV accuracy " + num(acc));
  o.check(rec == 1.0, "separable CV UAR " + num(rec));
  const double lib = learn::cross_validate_classifier(m, {0.7, 5, 5}, {}, {true, false}).mean;
  o.check(lib == acc, "library CV " + num(lib) + " differs from fold loop " + num(acc));

  double sum = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto shuffled = testing::make_separable(200, 20, 1.0, 100 + seed);
    std::vector<std::optional<std::string>> labels;
    for (const auto& r : shuffled.rows) labels.push_back(r.label);
    std::mt19937_64 rng(seed);
    std::shuffle(labels.begin(), labels.end(), rng);
    for (std::size_t i = 0; i < labels.size(); ++i) shuffled.rows[i].label = labels[i];
    sum += learn::cross_validate_classifier(shuffled, {0.7, 5, seed}, {}, {true, false}).mean;
  }
  const double chance = sum / 20;
  o.check(chance >= kChanceLow && chance <= kChanceHigh, "shuffled mean " + num(chance));
  if (o.pass) o.detail = "separable 1.0/1.0, shuffled " + num(chance);
  return o;
}

Outcome fluency_checks() {
  Outcome o;
  std::mt19937_64 rng(77);
  int bad = 0;
  for (int i = 0; i < 100; ++i) {
    const auto f = fluency::fluency_features(testing::make_timeline(rng));
    const bool ok = std::abs(f.TRT - (f.ST + f.SPT + f.FPT)) <= 1e-9 &&
                    std::abs(f.STR + f.SPR + f.FPR - 1.0) <= 1e-9 && f.AR >= f.SR &&
                    std::abs(f.MSR * f.runs - f.NumSyl) <= 1e-9;
    if (!ok) ++bad;
  }
  o.check(bad == 0, std::to_string(bad) + " of 100 timelines broke an identity");
  auto pause_count = [](double pause) {
    TranscriptTimeline tl{{{0.0, 1.0, IntervalKind::Speech, 4},
                           {1.0, 1.0 + pause, IntervalKind::SilentPause, 0},
                           {1.0 + pause, 2.0 + pause, IntervalKind::Speech, 3}}};
    return fluency::fluency_features(tl).NumSP;
  };
  o.check(pause_count(0.25) == 1, "0.25 s pause not counted");
  o.check(pause_count(0.249) == 0, "0.249 s pause counted");
  return o;
}

Outcome lingfeat_checks() {
  Outcome o;
  const double fre = lingfeat::readability(lingfeat::profile_text("The cat sat.")).fre;
  o.check(near(fre, kFreTarget, kFreTol), "FRE " + num(fre));

  lingfeat::TextProfile p;
  p.words = 100;
  p.sentences = 5;
  p.characters = 450;
  p.syllables = 120;
  const double base = lingfeat::readability(p).fre;
  auto more_syllables = p;
  more_syllables.syllables = 160;
  auto longer_sentences = p;
  longer_sentences.sentences = 3;
  o.check(lingfeat::readability(more_syllables).fre < base, "FRE did not fall with syllables");
  o.check(lingfeat::readability(longer_sentences).fre < base,
          "FRE did not fall with sentence length");

  std::vector<std::string> toks;
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> w(0, 40);
  for (int i = 0; i < 150; ++i) toks.push_back("w" + std::to_string(w(rng)));
  const auto ref = lingfeat::ttr_family(toks);
  int drift = 0;
  for (int k = 0; k < 50; ++k) {
    std::shuffle(toks.begin(), toks.end(), rng);
    const auto t = lingfeat::ttr_family(toks);
    if (t.ttr != ref.ttr || t.rttr != ref.rttr || t.cttr != ref.cttr || t.ndw != ref.ndw ||
        t.log_ttr != ref.log_ttr || t.uber != ref.uber)
      ++drift;
  }
  o.check(drift == 0, std::to_string(drift) + " shuffles changed the TTR family");
  if (o.pass) o.detail = "FRE " + num(fre);
  return o;
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

CliRun gaze_pipeline(const testing::TempDir& dir) {
  const std::string m = (dir / "m.csv").string();
  const std::string sel = (dir / "sel.txt").string();
  const std::string model = (dir / "model.json").string();
  const std::vector<std::vector<std::string>> steps = {
      {"gaze", (dir / "traces").string(), "--layout", (dir / "layout.json").string(), "-o", m},
      {"select", "--matrix", m, "--alpha", "0.01", "-o", sel},
      {"train", "--matrix", m, "--selection", sel, "--model-out", model, "--seed", "3"}};
  for (const auto& args : steps) {
    auto r = invoke(args);
    if (r.code != cli::kOk) return r;
  }
  return invoke({"eval", "--matrix", m, "--model", model, "-o", "-"});
}

CliRun simscore_golden() {
  const auto g = testing::golden_dir();
  return invoke({"simscore", (g / "summaries").string(), "--reference",
                 (g / "reference.txt").string(), "--resources", (g / "resources").string(),
                 "--source", "embedding:" + (g / "embeddings.txt").string(), "--reference-parse",
                 (g / "reference.conllu").string(), "--parses", (g / "parses").string(), "--unit",
                 "text"});
}

Outcome cli_smoke() {
  Outcome o;
  testing::TempDir dir("acceptance");
  testing::write_gaze_corpus(dir.path(), 40, 17);
  const auto first = gaze_pipeline(dir);
  o.check(first.code == cli::kOk, "pipeline exit " + std::to_string(first.code) + ": " + first.err);
  if (first.code == cli::kOk) {
    const auto j = nlohmann::json::parse(first.out, nullptr, false);
    bool valid = !j.is_discarded() && j.is_object();
    for (const char* key : {"kind", "c_rate", "uar", "cv_accuracy"})
      valid = valid && j.contains(key);
    o.check(valid, "metrics JSON malformed");
    const auto again = gaze_pipeline(dir);
    o.check(again.out == first.out, "pipeline rerun differs");
  }

  const auto sim = simscore_golden();
  o.check(sim.code == cli::kOk, "simscore exit " + std::to_string(sim.code) + ": " + sim.err);
  if (sim.code == cli::kOk) {
    const auto lines = io::split(sim.out, '\n');
    const auto cells = lines.size() > 1 ? io::split(lines[1], ',') : std::vector<std::string>{};
    const double overall = cells.size() == 5 ? io::parse_double(cells[4], "overall") : -1;
    o.check(near(overall, kOverallTarget, kOverallTol), "simscore overall " + num(overall));
    o.check(simscore_golden().out == sim.out, "simscore rerun differs");
    if (o.pass) o.detail = "simscore overall " + num(overall);
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"golden fixture", golden_fixture},
      {"levenshtein column", levenshtein_column},
      {"number rule", number_rule},
      {"gaze geometry", gaze_geometry},
      {"stats oracles", stats_oracles},
      {"alignment enumeration", alignment_exhaustive},
      {"learn", learn_checks},
      {"fluency", fluency_checks},
      {"lingfeat", lingfeat_checks},
      {"cli smoke", cli_smoke},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s%s%s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.empty() ? "" : ": ", o.detail.c_str());
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
