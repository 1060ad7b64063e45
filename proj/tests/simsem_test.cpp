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

#include <cmath>
#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "golden.hpp"
#include "readlens/corpus_io.hpp"
#include "readlens/error.hpp"

namespace readlens::simsem {
namespace {

using Tokens = std::vector<std::vector<std::string>>;

struct Golden {
  PreprocessResources res = load_resources(testing::golden_dir() / "resources");
  std::string ref_text = io::read_file(testing::golden_dir() / "reference.txt");
  std::string sum_text = io::read_file(testing::golden_dir() / "summaries" / "line2.txt");
  std::vector<ParsedSentence> ref_parse = io::parse_conllu(testing::golden_dir() / "reference.conllu");
  std::vector<ParsedSentence> sum_parse =
      io::parse_conllu(testing::golden_dir() / "parses" / "line2.conllu");
};

TEST(Preprocess, GoldenTokens) {
  Golden g;
  EXPECT_EQ(preprocess(g.ref_text, g.res),
            (Tokens{{"presently", "horse", "come", "camel", "monday", "morning", "saddle_horse_back"},
                    {"horse", "say", "camel_o_camel", "come", "work", "animal"}}));
  EXPECT_EQ(preprocess(g.sum_text, g.res),
            (Tokens{{"initially", "horse", "come", "camel"}, {"horse", "say", "do", "some", "work"}}));
}

TEST(Preprocess, TokenizeDropsPunctuation) {
  EXPECT_EQ(tokenize("Camel, O Camel!"), (std::vector<std::string>{"camel", "o", "camel"}));
  EXPECT_EQ(split_sentences("One. Two? Three").size(), 3u);
}

TEST(Score, GoldenTextUnit) {
  Golden g;
  const auto ref = make_document(g.ref_text, g.res, &g.ref_parse);
  const auto sum = make_document(g.sum_text, g.res, &g.sum_parse);
  SimOptions opts;
  opts.unit = PairingUnit::Text;
  const auto r = score(ref, sum, testing::table_similarity, opts);
  EXPECT_NEAR(r.tls, 5.78 / 7, 1e-12);
  EXPECT_EQ(r.matched_pairs, 6u);
  ASSERT_TRUE(r.syntax);
  EXPECT_DOUBLE_EQ(r.syntax->mdd1, 1.0);
  EXPECT_DOUBLE_EQ(r.syntax->mdd2, 1.0);
  EXPECT_NEAR(r.syntax->mdrs, 5.0 / 6, 1e-12);
  EXPECT_NEAR(r.tss, 1 + 5.0 / 6, 1e-12);
  EXPECT_EQ(r.concepts.total_ref, 13u);
  EXPECT_EQ(r.concepts.found, 7u);
  EXPECT_DOUBLE_EQ(r.concepts.alignment, 10.0);
  EXPECT_NEAR(r.tcs, 17.0 / 13, 1e-12);
  EXPECT_DOUBLE_EQ(r.overall, r.tls + r.tss + r.tcs);
}

TEST(Score, IdenticalTextIsMaximal) {
  Golden g;
  const auto ref = make_document(g.ref_text, g.res, &g.ref_parse);
  for (auto unit : {PairingUnit::Sentence, PairingUnit::Text}) {
    SimOptions opts;
    opts.unit = unit;
    const auto r = score(ref, ref, testing::table_similarity, opts);
    EXPECT_DOUBLE_EQ(r.tcs, 3.0);
    EXPECT_DOUBLE_EQ(r.concepts.concept_score, 1.0);
  }
  SimOptions text;
  text.unit = PairingUnit::Text;
  const auto r = score(ref, ref, testing::table_similarity, text);
  EXPECT_DOUBLE_EQ(r.tss, 2.0);
  EXPECT_NEAR(r.tls, 11.0 / 12, 1e-12);  // 11 unique reference tokens
}

TEST(Score, MissingParsesAreReported) {
  Golden g;
  const auto ref = make_document(g.ref_text, g.res, &g.ref_parse);
  const auto sum = make_document(g.sum_text, g.res);
  try {
    score(ref, sum, testing::table_similarity);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingResource);
  }
  SimOptions lax;
  lax.require_parses = false;
  EXPECT_DOUBLE_EQ(score(ref, sum, testing::table_similarity, lax).tss, 0.0);
}

TEST(Score, ElementsAddUpToOverall) {
  Golden g;
  const std::string annotated = "[setting]\n" + g.ref_text.substr(0, g.ref_text.find("The horse said")) +
                                "\n[plot]\n" + g.ref_text.substr(g.ref_text.find("The horse said"));
  const auto ref = make_document(annotated, g.res, &g.ref_parse, true);
  const auto sum = make_document(g.sum_text, g.res, &g.sum_parse);
  const auto r = score(ref, sum, testing::table_similarity);
  ASSERT_EQ(r.elements.size(), 2u);
  EXPECT_EQ(r.elements[0].element, "setting");
  double total = 0;
  for (const auto& e : r.elements) total += e.overall;
  EXPECT_NEAR(total, r.overall, 1e-12);
}

TEST(Score, EmptyReference) {
  PreprocessResources res;
  res.stopwords = {"the"};
  const auto ref = make_document("The.", res);
  const auto sum = make_document("Cats sleep.", res);
  SimOptions lax;
  lax.require_parses = false;
  EXPECT_THROW(score(ref, sum, testing::table_similarity, lax), Error);
}

TEST(WordSimilarity, NumbersMatchOnlyWhenEqual) {
  const std::vector<SimilaritySource> lev{SimilaritySource{}};
  EXPECT_EQ(word_similarity("1829", "1829", lev), 1.0);
  EXPECT_EQ(word_similarity("1829", "1830", lev), 0.0);
  EXPECT_EQ(word_similarity("3.5", "3.50", lev), 0.0);
  EXPECT_TRUE(is_number("1829"));
  EXPECT_FALSE(is_number("18a"));
}

TEST(WordSimilarity, LevenshteinColumn) {
  const std::vector<SimilaritySource> lev{SimilaritySource{}};
  for (const auto& row : testing::levenshtein_table())
    EXPECT_NEAR(word_similarity(row.a, row.b, lev), row.value, 0.005) << row.a << "/" << row.b;
}

TEST(WordSimilarity, EmbeddingCosineAndFallback) {
  auto table = std::make_shared<EmbeddingTable>(
      io::parse_embeddings_text("a 1 0\nb 0.6 0.8\nc -1 0\n"));
  SimilaritySource emb;
  emb.kind = SourceKind::Embedding;
  emb.embedding = table;
  EXPECT_NEAR(*emb.score("a", "b"), 0.6, 1e-12);
  EXPECT_FALSE(emb.score("a", "zzz"));
  const auto s = word_similarity("a", "zzz", {emb});
  EXPECT_GE(s, 0.0);
  EXPECT_LE(s, 1.0);
}

TEST(Taxonomy, PathSimilarity) {
  Taxonomy t;
  t.add_edge("dog.n", "canine.n");
  t.add_edge("canine.n", "animal.n");
  t.add_edge("cat.n", "animal.n");
  t.add_lemma("dog", "dog.n");
  t.add_lemma("cat", "cat.n");
  t.add_lemma("rock", "rock.n");
  EXPECT_DOUBLE_EQ(t.path_similarity("dog", "cat"), 1.0 / 4);
  EXPECT_DOUBLE_EQ(t.path_similarity("dog", "dog"), 1.0);
  EXPECT_DOUBLE_EQ(t.path_similarity("dog", "rock"), 0.0);
}

// Symmetric scorer with distinct values so greedy matching has no ties.
double hashed(const std::string& a, const std::string& b) {
  if (a == b) return 1.0;
  const auto h = std::hash<std::string>{}(a < b ? a + "|" + b : b + "|" + a);
  return static_cast<double>(h % 1000003) / 1000003.0;
}

std::vector<std::string> random_tokens(std::mt19937_64& rng) {
  static const std::vector<std::string> vocab = {"ant", "bee", "cat", "dog", "eel", "fox",
                                                 "gnu", "hen", "ibis", "jay", "kiwi", "lynx"};
  std::vector<std::string> out(std::uniform_int_distribution<int>(1, 8)(rng));
  for (auto& t : out) t = vocab[std::uniform_int_distribution<std::size_t>(0, vocab.size() - 1)(rng)];
  return out;
}

TEST(Matching, SymmetricBoundedOneToOne) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 200; ++it) {
    const auto a = random_tokens(rng);
    const auto b = random_tokens(rng);
    const auto ab = match_pairs(a, b, hashed, 0.5);
    const auto ba = match_pairs(b, a, hashed, 0.5);
    EXPECT_NEAR(tls(ab), tls(ba), 1e-12);
    const double n = static_cast<double>(ab.matched.size());
    EXPECT_GE(tls(ab), 0.0);
    EXPECT_LE(tls(ab), n / (n + 1) + 1e-12);
    std::vector<int> used_i(ab.t1.size()), used_j(ab.t2.size());
    for (const auto& m : ab.matched) {
      EXPECT_GE(m.score, 0.5);
      EXPECT_EQ(++used_i[m.i], 1);
      EXPECT_EQ(++used_j[m.j], 1);
    }
  }
}

TEST(Matching, UniqueTokensKeepFirstOccurrence) {
  const auto u = unique_tokens({"b", "a", "b", "c", "a"});
  ASSERT_EQ(u.size(), 3u);
  EXPECT_EQ(u[0], (std::pair<std::string, std::size_t>{"b", 0}));
  EXPECT_EQ(u[2], (std::pair<std::string, std::size_t>{"c", 3}));
}

TEST(Syntax, NoMatchesThrows) {
  SentencePair p;
  p.t1 = {"x"};
  p.t2 = {"y"};
  EXPECT_THROW(tss({TokenQuartet{}}, {TokenQuartet{}}, p), Error);
}

}  // namespace
}  // namespace readlens::simsem
