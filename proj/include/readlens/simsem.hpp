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

// Content similarity between a reference text and a written summary.
//
// overall = TLS + TSS + TCS where
//   TLS  sum of matched word-pair scores / (1 + matched pairs)
//   TSS  1 / (1 + |MDD1 - MDD2|) + share of matched pairs with equal
//        dependency relation
//   TCS  found concepts / reference concepts
//        + global alignment score of the concept sequences / reference concepts
//
// Word pairs are matched greedily, best score first, one-to-one, and only at
// or above the threshold (0.7 by default).

#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "readlens/types.hpp"

namespace readlens::simsem {

struct PreprocessResources {
  std::set<std::string> stopwords;
  std::unordered_map<std::string, std::string> lemma_map;
  // Token sequences merged into one token joined by '_'.
  std::vector<std::vector<std::string>> phrases;
  // Token sequence -> canonical entity.
  std::vector<std::pair<std::vector<std::string>, std::string>> substitutions;
};

// Directory with any of stopwords.txt, lemmas.tsv (form<TAB>lemma),
// phrases.txt (one phrase per line) and substitutions.tsv
// (surface<TAB>canonical). Missing files mean empty resources.
PreprocessResources load_resources(const std::filesystem::path& dir);

struct Token {
  std::string text;
  int source = -1;  // index into Sentence::words of the first source word
};

struct Sentence {
  std::vector<std::string> words;  // lowercased words before filtering
  std::vector<Token> tokens;       // preprocessed
};

std::vector<std::string> split_sentences(std::string_view text);
// Lowercased words; punctuation and symbols are dropped.
std::vector<std::string> tokenize(std::string_view sentence);

std::vector<Sentence> preprocess_detailed(std::string_view text,
                                          const PreprocessResources& res);
std::vector<std::vector<std::string>> preprocess(std::string_view text,
                                                 const PreprocessResources& res);

// Undirected synset graph plus the lemma -> synsets map.
class Taxonomy {
 public:
  void add_edge(const std::string& a, const std::string& b);
  void add_lemma(const std::string& lemma, const std::string& synset);
  bool has_lemma(const std::string& lemma) const;
  // max over synset pairs of 1 / (1 + shortest path edges); 0 if unconnected.
  double path_similarity(const std::string& l1, const std::string& l2) const;

  // edges.tsv (child<TAB>parent) and lemmas.tsv (lemma<TAB>synset).
  static Taxonomy load(const std::filesystem::path& dir);

 private:
  int distance(const std::string& from, const std::string& to) const;

  std::unordered_map<std::string, std::vector<std::string>> adjacency_;
  std::unordered_map<std::string, std::vector<std::string>> synsets_;
};

enum class SourceKind { Embedding, TaxonomyPath, Levenshtein };

struct SimilaritySource {
  SourceKind kind = SourceKind::Levenshtein;
  std::shared_ptr<const EmbeddingTable> embedding;
  std::shared_ptr<const Taxonomy> taxonomy;

  // Score in [0, 1], or empty when the source lacks either token.
  std::optional<double> score(const std::string& a, const std::string& b) const;
};

bool is_number(std::string_view s);

// Numbers score 1 iff equal; equal tokens score 1; otherwise the first
// source that knows both tokens answers, with Levenshtein as the last resort.
double word_similarity(const std::string& a, const std::string& b,
                       const std::vector<SimilaritySource>& sources);

using WordScorer = std::function<double(const std::string&, const std::string&)>;
WordScorer make_scorer(std::vector<SimilaritySource> sources);

struct MatchedPair {
  int i = 0;
  int j = 0;
  double score = 0.0;
};

struct SentencePair {
  std::vector<std::string> t1, t2;  // unique tokens, first occurrence order
  std::vector<MatchedPair> matched;
  std::size_t all_pairs_considered = 0;
};

// Unique tokens in first-occurrence order, with the index of that occurrence.
std::vector<std::pair<std::string, std::size_t>> unique_tokens(
    const std::vector<std::string>& tokens);

// Greedy one-to-one matching: best score first, ties to smaller i then j.
SentencePair match_pairs(const std::vector<std::string>& tokens1,
                         const std::vector<std::string>& tokens2,
                         const WordScorer& scorer, double threshold = 0.7);
// Same, reading scores from a precomputed |t1| x |t2| row-major matrix.
SentencePair match_pairs_scored(std::vector<std::string> t1, std::vector<std::string> t2,
                                const std::vector<double>& scores, double threshold);

double tls(const SentencePair& pair);

struct SyntaxScore {
  double mdd1 = 0.0;
  double mdd2 = 0.0;
  double mdrs = 0.0;
  double tss = 0.0;
};

// q1/q2 parallel to pair.t1/pair.t2; a token without a parse is left out of
// its MDD and never shares a relation. Throws NoAlignment without matches.
SyntaxScore tss(const std::vector<std::optional<TokenQuartet>>& q1,
                const std::vector<std::optional<TokenQuartet>>& q2,
                const SentencePair& pair);

// Parse quartet of every preprocessed token. Sentence counts must agree.
std::vector<std::vector<std::optional<TokenQuartet>>> project_parses(
    const std::vector<Sentence>& sentences, const std::vector<ParsedSentence>& parses);

struct Document {
  std::vector<Sentence> sentences;
  std::vector<std::vector<std::optional<TokenQuartet>>> quartets;  // may be empty
  std::vector<std::string> element_of_sentence;                    // may be empty

  std::vector<std::string> tokens_of(std::size_t s) const;
};

// Lines of the form "[setting]" open a text element for the sentences that
// follow; text before the first marker has no element.
Document make_document(std::string_view text, const PreprocessResources& res,
                       const std::vector<ParsedSentence>* parses = nullptr,
                       bool with_elements = false);

enum class PairingUnit { Sentence, Text };

struct SimOptions {
  double threshold = 0.7;
  PairingUnit unit = PairingUnit::Sentence;
  bool require_parses = true;
};

struct ConceptScore {
  std::size_t total_ref = 0;
  std::size_t found = 0;
  double concept_score = 0.0;
  double alignment = 0.0;
  double normalized = 0.0;
  double tcs = 0.0;
};

struct SentenceScore {
  std::size_t summary_sentence = 0;
  std::size_t partner = 0;
  std::size_t matched = 0;
  double tls = 0.0;
  double tss = 0.0;
};

struct ElementScore {
  std::string element;
  double tls = 0.0;
  double tss = 0.0;
  double tcs = 0.0;
  double overall = 0.0;
};

struct SimilarityReport {
  double tls = 0.0;
  double tss = 0.0;
  double tcs = 0.0;
  double overall = 0.0;
  std::size_t matched_pairs = 0;
  std::optional<SyntaxScore> syntax;  // text unit only
  ConceptScore concepts;
  std::vector<SentenceScore> sentences;
  std::vector<ElementScore> elements;  // sentence unit with annotated reference
};

// Concept score and per-block alignment. `partner[s]` is the reference
// sentence that summary sentence s is aligned under.
ConceptScore concept_similarity(const Document& ref, const Document& summary,
                                const std::vector<std::size_t>& partner,
                                const WordScorer& scorer, double threshold);

SimilarityReport score(const Document& ref, const Document& summary,
                       const WordScorer& scorer, const SimOptions& opts = {});

std::string report_json(const SimilarityReport& r);

}  // namespace readlens::simsem
