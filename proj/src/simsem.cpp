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

#include "readlens/simsem.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <unordered_set>

#include <json.hpp>

#include "readlens/alignment.hpp"
#include "readlens/corpus_io.hpp"
#include "readlens/error.hpp"
#include "readlens/kernels.hpp"
#include "readlens/stats.hpp"

namespace readlens::simsem {

namespace {

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

const std::set<std::string>& abbreviations() {
  static const std::set<std::string> kAbbrev = {
      "mr", "mrs", "ms", "dr", "prof", "st", "jr", "sr", "vs", "etc", "e.g", "i.e",
      "no", "mt", "gen", "col", "capt", "lt", "sgt", "inc", "ltd", "co"};
  return kAbbrev;
}

// Word immediately before position `dot`, lowercased (may contain dots).
std::string word_before(std::string_view text, std::size_t dot) {
  std::size_t b = dot;
  while (b > 0 && (is_word_char(text[b - 1]) || text[b - 1] == '.')) --b;
  return io::to_lower(text.substr(b, dot - b));
}

std::vector<std::string> words_of(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string join(const std::vector<std::string>& v, std::size_t from, std::size_t n,
                 char sep) {
  std::string s;
  for (std::size_t k = 0; k < n; ++k) {
    if (k) s += sep;
    s += v[from + k];
  }
  return s;
}

// Longest-first, left-to-right replacement of token sequences.
template <typename Emit>
std::vector<Token> rewrite(const std::vector<Token>& in,
                           const std::vector<std::vector<std::string>>& keys, Emit emit) {
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return keys[a].size() > keys[b].size();
  });
  std::vector<Token> out;
  for (std::size_t i = 0; i < in.size();) {
    bool hit = false;
    for (auto k : order) {
      const auto& key = keys[k];
      if (key.empty() || i + key.size() > in.size()) continue;
      bool eq = true;
      for (std::size_t t = 0; t < key.size() && eq; ++t) eq = in[i + t].text == key[t];
      if (!eq) continue;
      out.push_back({emit(k, i), in[i].source});
      i += key.size();
      hit = true;
      break;
    }
    if (!hit) out.push_back(in[i++]);
  }
  return out;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

// Vector of a token; phrases joined by '_' fall back to the mean of their parts.
std::optional<std::vector<double>> vector_of(const EmbeddingTable& t, const std::string& w) {
  if (const auto* v = t.find(w)) return *v;
  if (w.find('_') == std::string::npos) return std::nullopt;
  std::vector<double> sum(static_cast<std::size_t>(t.dimension), 0.0);
  std::size_t n = 0;
  for (const auto& part : io::split(w, '_')) {
    const auto* v = t.find(part);
    if (!v) return std::nullopt;
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*v)[i];
    ++n;
  }
  for (auto& x : sum) x /= static_cast<double>(n);
  return sum;
}

// Scores between every summary type and every reference type, computed once.
class ScoreTable {
 public:
  ScoreTable(const Document& ref, const Document& sum, const WordScorer& scorer) {
    for (const auto& s : ref.sentences)
      for (const auto& t : s.tokens) add(ref_index_, ref_types_, t.text);
    for (const auto& s : sum.sentences)
      for (const auto& t : s.tokens) add(sum_index_, sum_types_, t.text);
    scores_ = kernels::pair_scores(sum_types_, ref_types_, scorer);
  }

  double get(const std::string& summary_tok, const std::string& ref_tok) const {
    return scores_[sum_index_.at(summary_tok) * ref_types_.size() + ref_index_.at(ref_tok)];
  }

  // |t1| x |t2| matrix with t1 from the summary and t2 from the reference.
  std::vector<double> block(const std::vector<std::string>& t1,
                            const std::vector<std::string>& t2) const {
    std::vector<double> out;
    out.reserve(t1.size() * t2.size());
    for (const auto& a : t1)
      for (const auto& b : t2) out.push_back(get(a, b));
    return out;
  }

 private:
  static void add(std::unordered_map<std::string, std::size_t>& index,
                  std::vector<std::string>& types, const std::string& t) {
    if (index.emplace(t, types.size()).second) types.push_back(t);
  }

  std::unordered_map<std::string, std::size_t> ref_index_, sum_index_;
  std::vector<std::string> ref_types_, sum_types_;
  std::vector<double> scores_;
};

// A unit of text (one sentence or the whole text) as unique tokens with the
// parse quartet of each token's first occurrence.
struct Unit {
  std::vector<std::string> tokens;
  std::vector<std::optional<TokenQuartet>> quartets;
};

Unit make_unit(const Document& d, const std::vector<std::size_t>& sentences) {
  Unit u;
  std::unordered_set<std::string> seen;
  for (auto s : sentences) {
    const auto& toks = d.sentences[s].tokens;
    for (std::size_t k = 0; k < toks.size(); ++k) {
      if (!seen.insert(toks[k].text).second) continue;
      u.tokens.push_back(toks[k].text);
      if (!d.quartets.empty()) {
        u.quartets.push_back(d.quartets[s][k]);
      } else {
        u.quartets.emplace_back();
      }
    }
  }
  return u;
}

struct PairScore {
  SentencePair pair;
  double tls = 0.0;
  std::optional<SyntaxScore> syntax;
};

PairScore score_units(const Unit& summary, const Unit& ref, const ScoreTable& table,
                      double threshold, bool with_syntax) {
  PairScore out;
  out.pair = match_pairs_scored(summary.tokens, ref.tokens,
                                table.block(summary.tokens, ref.tokens), threshold);
  out.tls = tls(out.pair);
  if (with_syntax && !out.pair.matched.empty()) {
    // Syntax is reported reference-first, matching the TLS pair orientation
    // flipped back to (reference, summary).
    SentencePair flipped;
    flipped.t1 = out.pair.t2;
    flipped.t2 = out.pair.t1;
    for (const auto& m : out.pair.matched) flipped.matched.push_back({m.j, m.i, m.score});
    out.syntax = tss(ref.quartets, summary.quartets, flipped);
  }
  return out;
}

struct ConceptDetail {
  ConceptScore score;
  std::vector<double> found_by_ref_sentence;  // attributed by best match
  std::vector<double> align_by_block;
};

ConceptDetail concepts_detail(const Document& ref, const Document& summary,
                              const std::vector<std::size_t>& partner,
                              const ScoreTable& table, double threshold) {
  ConceptDetail d;
  const std::size_t nref = ref.sentences.size();
  d.found_by_ref_sentence.assign(nref, 0.0);
  d.align_by_block.assign(nref, 0.0);
  for (const auto& s : ref.sentences) d.score.total_ref += s.tokens.size();
  if (d.score.total_ref == 0) {
    throw Error(ErrorKind::EmptyReference, "reference text has no content tokens");
  }

  // Each summary token becomes the type of its best reference match, or a
  // symbol no reference token carries.
  std::vector<std::vector<std::string>> blocks(nref);
  for (std::size_t s = 0; s < summary.sentences.size(); ++s) {
    for (const auto& tok : summary.sentences[s].tokens) {
      double best = -1.0;
      std::size_t best_sent = 0;
      const std::string* best_tok = nullptr;
      for (std::size_t r = 0; r < nref; ++r) {
        for (const auto& rt : ref.sentences[r].tokens) {
          double v = table.get(tok.text, rt.text);
          if (v > best) {
            best = v;
            best_sent = r;
            best_tok = &rt.text;
          }
        }
      }
      std::string symbol = "\x1f" + tok.text;
      if (best_tok && best >= threshold) {
        ++d.score.found;
        d.found_by_ref_sentence[best_sent] += 1.0;
        symbol = *best_tok;
      }
      if (nref > 0) blocks[partner.at(s)].push_back(std::move(symbol));
    }
  }
  for (std::size_t r = 0; r < nref; ++r) {
    std::vector<std::string> ref_seq;
    for (const auto& t : ref.sentences[r].tokens) ref_seq.push_back(t.text);
    d.align_by_block[r] = needleman_wunsch(ref_seq, blocks[r]);
    d.score.alignment += d.align_by_block[r];
  }
  const double total = static_cast<double>(d.score.total_ref);
  // More matching summary tokens than reference tokens cannot mean more than
  // full coverage.
  const double found = std::min(static_cast<double>(d.score.found), total);
  if (d.score.found > 0) {
    const double scale = found / static_cast<double>(d.score.found);
    for (auto& f : d.found_by_ref_sentence) f *= scale;
  }
  d.score.concept_score = found / total;
  d.score.normalized = d.score.alignment / total;
  d.score.tcs = d.score.concept_score + d.score.normalized;
  return d;
}

}  // namespace

PreprocessResources load_resources(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorKind::MissingResource, "resource directory not found: " + dir.string());
  }
  PreprocessResources res;
  auto read_if = [&](const char* name) -> std::optional<std::string> {
    auto p = dir / name;
    if (!std::filesystem::exists(p)) return std::nullopt;
    return io::read_file(p);
  };
  if (auto t = read_if("stopwords.txt"))
    for (auto& w : words_of(*t)) res.stopwords.insert(w);
  if (auto t = read_if("lemmas.tsv")) {
    for (const auto& line : io::split(*t, '\n')) {
      auto f = io::split(io::trim(line), '\t');
      if (f.size() < 2 || io::trim(f[0]).empty() || f[0][0] == '#') continue;
      res.lemma_map[io::to_lower(io::trim(f[0]))] = io::to_lower(io::trim(f[1]));
    }
  }
  if (auto t = read_if("phrases.txt")) {
    for (const auto& line : io::split(*t, '\n')) {
      auto w = words_of(line);
      if (w.size() >= 2 && w[0][0] != '#') res.phrases.push_back(std::move(w));
    }
  }
  if (auto t = read_if("substitutions.tsv")) {
    for (const auto& line : io::split(*t, '\n')) {
      auto f = io::split(io::trim(line), '\t');
      if (f.size() < 2 || io::trim(f[0]).empty() || f[0][0] == '#') continue;
      auto target = words_of(f[1]);
      if (target.empty()) continue;
      res.substitutions.emplace_back(words_of(f[0]), join(target, 0, target.size(), '_'));
    }
  }
  return res;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    std::string_view s = io::trim(text.substr(start, end - start));
    if (!s.empty()) out.emplace_back(s);
    start = end;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    // Swallow runs like "?!" or "..." and closing quotes or brackets.
    std::size_t j = i + 1;
    while (j < text.size() && (text[j] == '.' || text[j] == '!' || text[j] == '?')) ++j;
    while (j < text.size() && (text[j] == '"' || text[j] == '\'' || text[j] == ')')) ++j;
    if (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) continue;
    if (c == '.' && j == i + 1) {
      const std::string w = word_before(text, i);
      if (abbreviations().count(w) || (w.size() == 1 && std::isalpha(static_cast<unsigned char>(w[0]))))
        continue;
    }
    flush(j);
    i = j - 1;
  }
  flush(text.size());
  return out;
}

std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    const char c = sentence[i];
    const bool inner = (c == '\'' || c == '-') && !cur.empty() && i + 1 < sentence.size() &&
                       is_word_char(sentence[i + 1]);
    if (is_word_char(c) || inner) {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<Sentence> preprocess_detailed(std::string_view text,
                                          const PreprocessResources& res) {
  std::vector<std::vector<std::string>> sub_keys;
  for (const auto& [k, _] : res.substitutions) sub_keys.push_back(k);

  std::vector<Sentence> out;
  for (const auto& raw : split_sentences(text)) {
    Sentence s;
    s.words = tokenize(raw);
    std::vector<Token> toks;
    for (std::size_t i = 0; i < s.words.size(); ++i)
      if (!res.stopwords.count(s.words[i])) toks.push_back({s.words[i], static_cast<int>(i)});
    toks = rewrite(toks, sub_keys,
                   [&](std::size_t k, std::size_t) { return res.substitutions[k].second; });
    toks = rewrite(toks, res.phrases, [&](std::size_t k, std::size_t) {
      return join(res.phrases[k], 0, res.phrases[k].size(), '_');
    });
    for (auto& t : toks) {
      auto it = res.lemma_map.find(t.text);
      if (it != res.lemma_map.end()) t.text = it->second;
    }
    s.tokens = std::move(toks);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::vector<std::string>> preprocess(std::string_view text,
                                                 const PreprocessResources& res) {
  std::vector<std::vector<std::string>> out;
  for (const auto& s : preprocess_detailed(text, res)) {
    std::vector<std::string> t;
    for (const auto& tok : s.tokens) t.push_back(tok.text);
    out.push_back(std::move(t));
  }
  return out;
}

void Taxonomy::add_edge(const std::string& a, const std::string& b) {
  adjacency_[a].push_back(b);
  adjacency_[b].push_back(a);
}

void Taxonomy::add_lemma(const std::string& lemma, const std::string& synset) {
  synsets_[lemma].push_back(synset);
}

bool Taxonomy::has_lemma(const std::string& lemma) const { return synsets_.count(lemma) > 0; }

int Taxonomy::distance(const std::string& from, const std::string& to) const {
  // Multi-source BFS from every synset of `from` to any synset of `to`.
  const auto& src = synsets_.at(from);
  const auto& dst_list = synsets_.at(to);
  std::unordered_set<std::string> dst(dst_list.begin(), dst_list.end());
  std::unordered_map<std::string, int> dist;
  std::deque<std::string> queue;
  for (const auto& s : src) {
    if (dist.emplace(s, 0).second) queue.push_back(s);
  }
  while (!queue.empty()) {
    std::string cur = queue.front();
    queue.pop_front();
    const int d = dist[cur];
    if (dst.count(cur)) return d;
    auto it = adjacency_.find(cur);
    if (it == adjacency_.end()) continue;
    for (const auto& nxt : it->second) {
      if (dist.emplace(nxt, d + 1).second) queue.push_back(nxt);
    }
  }
  return -1;
}

double Taxonomy::path_similarity(const std::string& l1, const std::string& l2) const {
  if (l1 == l2) return 1.0;
  if (!has_lemma(l1) || !has_lemma(l2)) return 0.0;
  const int d = distance(l1, l2);
  return d < 0 ? 0.0 : 1.0 / (1.0 + d);
}

Taxonomy Taxonomy::load(const std::filesystem::path& dir) {
  Taxonomy t;
  const auto edges = dir / "edges.tsv";
  const auto lemmas = dir / "lemmas.tsv";
  if (!std::filesystem::exists(edges) || !std::filesystem::exists(lemmas)) {
    throw Error(ErrorKind::MissingResource,
                "taxonomy needs edges.tsv and lemmas.tsv in " + dir.string());
  }
  std::size_t n = 0;
  for (const auto& line : io::split(io::read_file(edges), '\n')) {
    ++n;
    auto l = io::trim(line);
    if (l.empty() || l[0] == '#') continue;
    auto f = io::split(l, '\t');
    if (f.size() < 2) {
      throw Error(ErrorKind::MalformedRow, "edges.tsv line " + std::to_string(n));
    }
    t.add_edge(std::string(io::trim(f[0])), std::string(io::trim(f[1])));
  }
  n = 0;
  for (const auto& line : io::split(io::read_file(lemmas), '\n')) {
    ++n;
    auto l = io::trim(line);
    if (l.empty() || l[0] == '#') continue;
    auto f = io::split(l, '\t');
    if (f.size() < 2) {
      throw Error(ErrorKind::MalformedRow, "lemmas.tsv line " + std::to_string(n));
    }
    t.add_lemma(io::to_lower(io::trim(f[0])), std::string(io::trim(f[1])));
  }
  return t;
}

std::optional<double> SimilaritySource::score(const std::string& a,
                                              const std::string& b) const {
  switch (kind) {
    case SourceKind::Embedding: {
      if (!embedding) return std::nullopt;
      auto va = vector_of(*embedding, a);
      auto vb = vector_of(*embedding, b);
      if (!va || !vb) return std::nullopt;
      return cosine(*va, *vb);
    }
    case SourceKind::TaxonomyPath:
      if (!taxonomy || !taxonomy->has_lemma(a) || !taxonomy->has_lemma(b))
        return std::nullopt;
      return taxonomy->path_similarity(a, b);
    case SourceKind::Levenshtein:
      return stats::levenshtein_sim(a, b);
  }
  return std::nullopt;
}

bool is_number(std::string_view s) {
  if (s.empty()) return false;
  bool digit = false;
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digit = true;
    } else if (c != '.' && c != ',') {
      return false;
    }
  }
  return digit;
}

double word_similarity(const std::string& a, const std::string& b,
                       const std::vector<SimilaritySource>& sources) {
  if (is_number(a) && is_number(b)) return a == b ? 1.0 : 0.0;
  if (a == b) return 1.0;
  for (const auto& src : sources) {
    if (auto v = src.score(a, b)) return std::clamp(*v, 0.0, 1.0);
  }
  return stats::levenshtein_sim(a, b);
}

WordScorer make_scorer(std::vector<SimilaritySource> sources) {
  return [sources = std::move(sources)](const std::string& a, const std::string& b) {
    return word_similarity(a, b, sources);
  };
}

std::vector<std::pair<std::string, std::size_t>> unique_tokens(
    const std::vector<std::string>& tokens) {
  std::vector<std::pair<std::string, std::size_t>> out;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if (seen.insert(tokens[i]).second) out.emplace_back(tokens[i], i);
  return out;
}

SentencePair match_pairs_scored(std::vector<std::string> t1, std::vector<std::string> t2,
                                const std::vector<double>& scores, double threshold) {
  SentencePair p;
  p.t1 = std::move(t1);
  p.t2 = std::move(t2);
  const std::size_t n1 = p.t1.size(), n2 = p.t2.size();
  if (scores.size() != n1 * n2) {
    throw Error(ErrorKind::DimensionMismatch, "score matrix does not match token counts");
  }
  p.all_pairs_considered = n1 * n2;
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  // Row-major index order already encodes the (i, j) tie-break.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<bool> used1(n1, false), used2(n2, false);
  for (auto k : order) {
    if (scores[k] < threshold) break;
    const std::size_t i = k / n2, j = k % n2;
    if (used1[i] || used2[j]) continue;
    used1[i] = used2[j] = true;
    p.matched.push_back({static_cast<int>(i), static_cast<int>(j), scores[k]});
  }
  return p;
}

SentencePair match_pairs(const std::vector<std::string>& tokens1,
                         const std::vector<std::string>& tokens2, const WordScorer& scorer,
                         double threshold) {
  std::vector<std::string> t1, t2;
  for (auto& [t, _] : unique_tokens(tokens1)) t1.push_back(t);
  for (auto& [t, _] : unique_tokens(tokens2)) t2.push_back(t);
  auto scores = kernels::pair_scores(t1, t2, scorer);
  return match_pairs_scored(std::move(t1), std::move(t2), scores, threshold);
}

double tls(const SentencePair& pair) {
  double sum = 0;
  for (const auto& m : pair.matched) sum += m.score;
  return sum / (1.0 + static_cast<double>(pair.matched.size()));
}

SyntaxScore tss(const std::vector<std::optional<TokenQuartet>>& q1,
                const std::vector<std::optional<TokenQuartet>>& q2,
                const SentencePair& pair) {
  if (pair.matched.empty()) {
    throw Error(ErrorKind::NoAlignment, "no matched word pairs for syntactic similarity");
  }
  if (q1.size() != pair.t1.size() || q2.size() != pair.t2.size()) {
    throw Error(ErrorKind::DimensionMismatch, "parse quartets do not cover the tokens");
  }
  double d1 = 0, n1 = 0, d2 = 0, n2 = 0, shared = 0;
  for (const auto& m : pair.matched) {
    const auto& a = q1[m.i];
    const auto& b = q2[m.j];
    if (a) {
      d1 += a->dep_dist;
      n1 += 1;
    }
    if (b) {
      d2 += b->dep_dist;
      n2 += 1;
    }
    if (a && b && a->dep_rel == b->dep_rel) shared += 1;
  }
  SyntaxScore s;
  s.mdd1 = n1 > 0 ? d1 / n1 : 0.0;
  s.mdd2 = n2 > 0 ? d2 / n2 : 0.0;
  s.mdrs = shared / static_cast<double>(pair.matched.size());
  s.tss = 1.0 / (1.0 + std::abs(s.mdd1 - s.mdd2)) + s.mdrs;
  return s;
}

std::vector<std::vector<std::optional<TokenQuartet>>> project_parses(
    const std::vector<Sentence>& sentences, const std::vector<ParsedSentence>& parses) {
  if (sentences.size() != parses.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "text has " + std::to_string(sentences.size()) + " sentences but the parse has " +
                    std::to_string(parses.size()));
  }
  std::vector<std::vector<std::optional<TokenQuartet>>> out(sentences.size());
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const auto& words = sentences[s].words;
    const auto& ptoks = parses[s].tokens;
    // Raw word index -> parse token, by a forward scan on the surface form
    // and then on the lemma.
    std::vector<int> map(words.size(), -1);
    std::size_t p = 0;
    for (std::size_t w = 0; w < words.size(); ++w) {
      for (std::size_t q = p; q < ptoks.size(); ++q) {
        if (io::to_lower(ptoks[q].form) == words[w]) {
          map[w] = static_cast<int>(q);
          break;
        }
      }
      if (map[w] < 0) {
        for (std::size_t q = p; q < ptoks.size(); ++q) {
          if (io::to_lower(ptoks[q].lemma) == words[w]) {
            map[w] = static_cast<int>(q);
            break;
          }
        }
      }
      if (map[w] >= 0) p = static_cast<std::size_t>(map[w]) + 1;
    }
    // Parses that already hold only the preprocessed tokens do not line up
    // with the raw words; those tokens are found by their own text instead.
    std::size_t after = 0;
    for (const auto& t : sentences[s].tokens) {
      int q = t.source >= 0 ? map[t.source] : -1;
      if (q < 0 || static_cast<std::size_t>(q) < after) {
        q = -1;
        const std::string head = io::split(t.text, '_').front();
        for (std::size_t k = after; k < ptoks.size() && q < 0; ++k) {
          const std::string form = io::to_lower(ptoks[k].form);
          if (form == t.text || form == head || io::to_lower(ptoks[k].lemma) == t.text)
            q = static_cast<int>(k);
        }
        if (q < 0 && t.source >= 0) q = map[t.source];
      }
      if (q >= 0) {
        out[s].push_back(ptoks[q]);
        after = std::max(after, static_cast<std::size_t>(q) + 1);
      } else {
        out[s].emplace_back();
      }
    }
  }
  return out;
}

std::vector<std::string> Document::tokens_of(std::size_t s) const {
  std::vector<std::string> out;
  for (const auto& t : sentences.at(s).tokens) out.push_back(t.text);
  return out;
}

Document make_document(std::string_view text, const PreprocessResources& res,
                       const std::vector<ParsedSentence>* parses, bool with_elements) {
  Document d;
  if (!with_elements) {
    d.sentences = preprocess_detailed(text, res);
  } else {
    std::string element;
    std::string segment;
    auto flush = [&] {
      for (auto& s : preprocess_detailed(segment, res)) {
        d.sentences.push_back(std::move(s));
        d.element_of_sentence.push_back(element);
      }
      segment.clear();
    };
    for (const auto& line : io::split(text, '\n')) {
      auto t = io::trim(line);
      if (t.size() > 2 && t.front() == '[' && t.back() == ']') {
        flush();
        element = io::to_lower(io::trim(t.substr(1, t.size() - 2)));
        continue;
      }
      segment += line;
      segment += '\n';
    }
    flush();
  }
  if (parses) d.quartets = project_parses(d.sentences, *parses);
  return d;
}

ConceptScore concept_similarity(const Document& ref, const Document& summary,
                                const std::vector<std::size_t>& partner,
                                const WordScorer& scorer, double threshold) {
  ScoreTable table(ref, summary, scorer);
  return concepts_detail(ref, summary, partner, table, threshold).score;
}

SimilarityReport score(const Document& ref, const Document& summary,
                       const WordScorer& scorer, const SimOptions& opts) {
  std::size_t ref_tokens = 0;
  for (const auto& s : ref.sentences) ref_tokens += s.tokens.size();
  if (ref_tokens == 0) {
    throw Error(ErrorKind::EmptyReference, "reference text has no content tokens");
  }
  const bool have_parses = !ref.quartets.empty() && !summary.quartets.empty();
  if (opts.require_parses && !have_parses) {
    throw Error(ErrorKind::MissingResource, "dependency parses are required");
  }

  ScoreTable table(ref, summary, scorer);
  const std::size_t nref = ref.sentences.size();
  const std::size_t nsum = summary.sentences.size();

  std::vector<Unit> ref_units;
  for (std::size_t r = 0; r < nref; ++r) ref_units.push_back(make_unit(ref, {r}));

  // Partner of each summary sentence: the reference sentence with the best TLS.
  std::vector<std::size_t> partner(nsum, 0);
  std::vector<PairScore> best(nsum);
  for (std::size_t s = 0; s < nsum; ++s) {
    const Unit su = make_unit(summary, {s});
    for (std::size_t r = 0; r < nref; ++r) {
      PairScore ps = score_units(su, ref_units[r], table, opts.threshold, false);
      if (r == 0 || ps.tls > best[s].tls) {
        best[s] = std::move(ps);
        partner[s] = r;
      }
    }
    if (have_parses) {
      best[s] = score_units(su, ref_units[partner[s]], table, opts.threshold, true);
    }
  }

  SimilarityReport rep;
  if (opts.unit == PairingUnit::Sentence) {
    for (std::size_t s = 0; s < nsum; ++s) {
      SentenceScore ss;
      ss.summary_sentence = s;
      ss.partner = partner[s];
      ss.matched = best[s].pair.matched.size();
      ss.tls = best[s].tls;
      ss.tss = best[s].syntax ? best[s].syntax->tss : 0.0;
      rep.tls += ss.tls;
      rep.tss += ss.tss;
      rep.matched_pairs += ss.matched;
      rep.sentences.push_back(ss);
    }
  } else {
    std::vector<std::size_t> all_ref(nref), all_sum(nsum);
    std::iota(all_ref.begin(), all_ref.end(), 0);
    std::iota(all_sum.begin(), all_sum.end(), 0);
    const Unit ru = make_unit(ref, all_ref);
    const Unit su = make_unit(summary, all_sum);
    PairScore ps = score_units(su, ru, table, opts.threshold, have_parses);
    rep.tls = ps.tls;
    rep.matched_pairs = ps.pair.matched.size();
    if (ps.syntax) {
      rep.syntax = ps.syntax;
      rep.tss = ps.syntax->tss;
    }
  }

  const ConceptDetail cd = concepts_detail(ref, summary, partner, table, opts.threshold);
  rep.concepts = cd.score;
  rep.tcs = cd.score.tcs;
  rep.overall = rep.tls + rep.tss + rep.tcs;

  if (opts.unit == PairingUnit::Sentence && !ref.element_of_sentence.empty()) {
    std::vector<std::string> names;
    std::map<std::string, ElementScore> by_name;
    auto entry = [&](std::size_t r) -> ElementScore& {
      std::string name = ref.element_of_sentence[r];
      if (name.empty()) name = "unlabeled";
      if (!by_name.count(name)) {
        names.push_back(name);
        by_name[name].element = name;
      }
      return by_name[name];
    };
    for (std::size_t r = 0; r < nref; ++r) entry(r);
    const double total = static_cast<double>(cd.score.total_ref);
    for (const auto& ss : rep.sentences) {
      auto& e = entry(ss.partner);
      e.tls += ss.tls;
      e.tss += ss.tss;
    }
    for (std::size_t r = 0; r < nref; ++r) {
      entry(r).tcs += (cd.found_by_ref_sentence[r] + cd.align_by_block[r]) / total;
    }
    for (const auto& n : names) {
      auto e = by_name[n];
      e.overall = e.tls + e.tss + e.tcs;
      rep.elements.push_back(e);
    }
  }
  return rep;
}

std::string report_json(const SimilarityReport& r) {
  nlohmann::ordered_json j;
  j["tls"] = r.tls;
  j["tss"] = r.tss;
  j["tcs"] = r.tcs;
  j["overall"] = r.overall;
  j["matched_pairs"] = r.matched_pairs;
  if (r.syntax) {
    j["syntax"] = {{"mdd_reference", r.syntax->mdd1},
                   {"mdd_summary", r.syntax->mdd2},
                   {"mdrs", r.syntax->mdrs}};
  }
  j["concepts"] = {{"total_reference", r.concepts.total_ref},
                   {"found", r.concepts.found},
                   {"concept_score", r.concepts.concept_score},
                   {"alignment", r.concepts.alignment},
                   {"normalized_alignment", r.concepts.normalized}};
  auto sents = nlohmann::ordered_json::array();
  for (const auto& s : r.sentences) {
    sents.push_back({{"summary_sentence", s.summary_sentence},
                     {"reference_sentence", s.partner},
                     {"matched_pairs", s.matched},
                     {"tls", s.tls},
                     {"tss", s.tss}});
  }
  if (!sents.empty()) j["sentences"] = std::move(sents);
  if (!r.elements.empty()) {
    auto els = nlohmann::ordered_json::array();
    for (const auto& e : r.elements) {
      els.push_back({{"element", e.element},
                     {"tls", e.tls},
                     {"tss", e.tss},
                     {"tcs", e.tcs},
                     {"overall", e.overall}});
    }
    j["elements"] = std::move(els);
  }
  return j.dump(2) + "\n";
}

}  // namespace readlens::simsem
