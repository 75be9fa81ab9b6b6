#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>

#include "docqa/corpus/normalize.hpp"
#include "docqa/error.hpp"
#include "docqa/retrieve/index.hpp"
#include "docqa/retrieve/ranking.hpp"
#include "docqa/retrieve/training_pairs.hpp"
#include "test_support.hpp"

using namespace docqa;
using namespace docqa::retrieve;
using docqa::fixtures::make_document;
using docqa::fixtures::naive_bm25;
using docqa::fixtures::naive_dot;

namespace {

std::vector<std::string> ids(const RankedList& r) {
  std::vector<std::string> out;
  for (const auto& e : r.entries) out.push_back(e.passage_id);
  return out;
}

double score_of(const RankedList& r, const std::string& id) {
  for (const auto& e : r.entries)
    if (e.passage_id == id) return e.score;
  throw std::runtime_error("missing " + id);
}

class FixedScorer : public PairScorer {
 public:
  explicit FixedScorer(std::map<std::string, double> by_text) : by_text_(std::move(by_text)) {}
  std::vector<double> score(const std::vector<std::pair<std::string, std::string>>& pairs) override {
    ++calls;
    max_batch = std::max(max_batch, pairs.size());
    std::vector<double> out;
    for (const auto& [q, p] : pairs) out.push_back(by_text_.at(p));
    return out;
  }
  std::size_t calls = 0;
  std::size_t max_batch = 0;

 private:
  std::map<std::string, double> by_text_;
};

const std::vector<std::string> kBm25Fixture = {"the seed lexicon consists of predicates",
                                                "we evaluate on the dataset",
                                                "seed lexicon polarity scores seed"};

}  // namespace

TEST(InvertedIndex, Statistics) {
  const auto doc = make_document({"one two three four", "a b c d e f", "x y"});
  // "a" is an article and drops out of normalization.
  const auto doc2 = make_document({"one two three four", "b c d e f g", "x y"});
  const auto idx = InvertedIndex::build(doc2);
  EXPECT_EQ(idx.passage_count(), 3u);
  EXPECT_DOUBLE_EQ(idx.avg_len(), 4.0);
  EXPECT_EQ(idx.length(1), 6u);
  EXPECT_TRUE(idx.postings("absent").empty());
  EXPECT_EQ(idx.document_frequency("two"), 1u);
  EXPECT_EQ(idx.doc_id(), doc2.doc_id);
  EXPECT_EQ(InvertedIndex::build(doc).length(1), 5u);
}

TEST(InvertedIndex, RebuildAndRoundTripAreExact) {
  const auto doc = make_document(kBm25Fixture);
  const auto a = InvertedIndex::build(doc);
  const auto b = InvertedIndex::build(doc);
  EXPECT_EQ(a, b);
  EXPECT_EQ(InvertedIndex::deserialize(a.serialize()), a);
  EXPECT_EQ(a.serialize(), b.serialize());
}

TEST(InvertedIndex, EmptyDocumentRejected) {
  corpus::Document empty;
  empty.doc_id = "d0";
  EXPECT_THROW(InvertedIndex::build(empty), ValidationError);
}

TEST(Bm25, ThreePassageFixture) {
  const auto doc = make_document(kBm25Fixture);
  const auto r = bm25_rank("seed lexicon", InvertedIndex::build(doc));
  EXPECT_EQ(ids(r), (std::vector<std::string>{"p0002", "p0000", "p0001"}));
  EXPECT_NEAR(score_of(r, "p0002"), 1.0741815489087396, 1e-12);
  EXPECT_NEAR(score_of(r, "p0000"), 0.9274552327846117, 1e-12);
  EXPECT_EQ(score_of(r, "p0001"), 0.0);

  std::vector<std::vector<std::string>> toks;
  for (const auto& t : kBm25Fixture) toks.push_back(corpus::normalize_tokens(t));
  const auto oracle = naive_bm25(toks, corpus::normalize_tokens("seed lexicon"));
  for (std::size_t i = 0; i < 3; ++i)
    EXPECT_NEAR(score_of(r, doc.passages[i].passage_id), oracle[i], 1e-12);
}

TEST(Bm25, NoSharedTermsAndSinglePassage) {
  const auto doc = make_document(kBm25Fixture);
  const auto r = bm25_rank("unrelated words", InvertedIndex::build(doc));
  EXPECT_EQ(ids(r), (std::vector<std::string>{"p0000", "p0001", "p0002"}));
  for (const auto& e : r.entries) EXPECT_EQ(e.score, 0.0);

  const auto one = make_document({"only passage here"});
  const auto r1 = bm25_rank("passage", InvertedIndex::build(one));
  ASSERT_EQ(r1.entries.size(), 1u);
  EXPECT_GT(r1.entries[0].score, 0.0);
  EXPECT_EQ(r1.retriever, Retriever::bm25);
}

TEST(Bm25, MatchesNaiveOracleOnRandomCorpora) {
  std::mt19937 rng(7);
  const char* vocab[] = {"seed", "lexicon", "event", "polarity", "cause", "pair", "model",
                         "score", "label", "corpus", "text", "web"};
  const auto start = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> texts;
    std::vector<std::vector<std::string>> toks;
    const int n = 1 + static_cast<int>(rng() % 10);
    for (int i = 0; i < n; ++i) {
      std::string t;
      const int len = 1 + static_cast<int>(rng() % 8);
      for (int j = 0; j < len; ++j) t += std::string(j ? " " : "") + vocab[rng() % 12];
      texts.push_back(t);
      toks.push_back(corpus::normalize_tokens(t));
    }
    std::string q;
    for (int j = 0, m = 1 + static_cast<int>(rng() % 4); j < m; ++j) q += std::string(" ") + vocab[rng() % 12];
    const auto doc = make_document(texts);
    const auto r = bm25_rank(q, InvertedIndex::build(doc));
    const auto oracle = naive_bm25(toks, corpus::normalize_tokens(q));
    for (int i = 0; i < n; ++i)
      ASSERT_NEAR(score_of(r, doc.passages[i].passage_id), oracle[i], 1e-9) << "trial " << trial;
    for (std::size_t i = 1; i < r.entries.size(); ++i)
      ASSERT_GE(r.entries[i - 1].score, r.entries[i].score);
  }
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(5));
}

TEST(Bm25, DuplicatingAQueryTermNeverLowersTheScore) {
  std::mt19937 rng(3);
  const char* vocab[] = {"seed", "lexicon", "event", "polarity", "cause", "pair"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> texts;
    for (int i = 0; i < 5; ++i) {
      std::string t;
      for (int j = 0, len = 1 + static_cast<int>(rng() % 6); j < len; ++j) t += std::string(" ") + vocab[rng() % 6];
      texts.push_back(t);
    }
    const std::string term = vocab[rng() % 6];
    const std::size_t target = rng() % 5;
    auto grown = texts;
    grown[target] += " " + term;
    const auto before = bm25_rank(term, InvertedIndex::build(make_document(texts)));
    const auto after = bm25_rank(term, InvertedIndex::build(make_document(grown)));
    const auto id = make_document(texts).passages[target].passage_id;
    // Adding the first occurrence changes idf for everyone; only compare when
    // the term was already present.
    if (texts[target].find(term) == std::string::npos) continue;
    EXPECT_GE(score_of(after, id) + 1e-12, score_of(before, id));
  }
}

TEST(Bm25, ParamsValidated) {
  EXPECT_THROW((Bm25Params{-0.1, 0.4}.validate()), ValidationError);
  EXPECT_THROW((Bm25Params{0.9, 1.5}.validate()), ValidationError);
  EXPECT_NO_THROW((Bm25Params{0.0, 1.0}.validate()));
}

TEST(DualEncoder, Examples) {
  const std::vector<double> q{1, 0};
  const std::vector<std::pair<std::string, std::vector<double>>> ps{{"p1", {2, 0}}, {"p2", {0, 3}}};
  const auto r = dual_encoder_rank(q, ps);
  ASSERT_EQ(r.entries.size(), 2u);
  EXPECT_EQ(r.entries[0], (RankedEntry{"p1", 2.0}));
  EXPECT_EQ(r.entries[1], (RankedEntry{"p2", 0.0}));

  const std::vector<double> zero{0, 0};
  EXPECT_EQ(ids(dual_encoder_rank(zero, ps)), (std::vector<std::string>{"p1", "p2"}));

  const std::vector<std::pair<std::string, std::vector<double>>> bad{{"p1", {1, 0}}, {"p9", {1}}};
  try {
    dual_encoder_rank(q, bad);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("p9"), std::string::npos);
  }
}

TEST(DualEncoder, MatchesNaiveDotAndIgnoresMonotoneTransforms) {
  std::mt19937 rng(9);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> q(8);
    for (auto& v : q) v = g(rng);
    std::vector<std::pair<std::string, std::vector<double>>> ps;
    for (int i = 0; i < 5; ++i) {
      std::vector<double> v(8);
      for (auto& x : v) x = g(rng);
      ps.emplace_back("p" + std::to_string(i), v);
    }
    const auto r = dual_encoder_rank(q, ps);
    std::vector<std::size_t> order(5);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return naive_dot(q, ps[a].second) > naive_dot(q, ps[b].second);
    });
    for (std::size_t i = 0; i < 5; ++i) {
      EXPECT_EQ(r.entries[i].passage_id, ps[order[i]].first);
      EXPECT_NEAR(r.entries[i].score, naive_dot(q, ps[order[i]].second), 1e-12);
    }
    // Positive monotone transform of scores: rank_by_score on exp(3s + 1).
    std::vector<RankedEntry> transformed;
    for (const auto& [id, v] : ps) transformed.push_back({id, std::exp(3 * naive_dot(q, v) + 1)});
    EXPECT_EQ(ids(rank_by_score(transformed, Retriever::dual_encoder)), ids(r));
  }
}

TEST(DualEncoder, UsesEmbedder) {
  struct Axis : Embedder {
    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override {
      std::vector<std::vector<double>> out;
      for (const auto& t : texts) out.push_back({static_cast<double>(t.size()), 1.0});
      return out;
    }
  } embedder;
  const auto doc = make_document({"short", "a much longer passage"});
  const auto r = dual_encoder_rank("question", doc, embedder);
  EXPECT_EQ(r.entries[0].passage_id, "p0001");
  EXPECT_EQ(r.retriever, Retriever::dual_encoder);
}

TEST(CrossEncoder, Figure2Scores) {
  const auto doc = make_document({"alpha", "beta", "gamma"});
  FixedScorer scorer({{"alpha", 0.07}, {"beta", 0.10}, {"gamma", 0.93}});
  const auto r = cross_encoder_rank("q", doc.passages, scorer);
  EXPECT_EQ(ids(r), (std::vector<std::string>{"p0002", "p0001", "p0000"}));
  EXPECT_EQ(r.retriever, Retriever::cross_encoder);
  EXPECT_EQ(classify_evidence(r), (std::set<std::string>{"p0002"}));
}

TEST(CrossEncoder, TiesKeepDocumentOrder) {
  const auto doc = make_document({"alpha", "beta", "gamma"});
  FixedScorer scorer({{"alpha", 0.5}, {"beta", 0.5}, {"gamma", 0.5}});
  const auto r = cross_encoder_rank("q", doc.passages, scorer);
  EXPECT_EQ(ids(r), (std::vector<std::string>{"p0000", "p0001", "p0002"}));
  EXPECT_EQ(classify_evidence(r).size(), 3u);
}

TEST(CrossEncoder, BatchSizeDoesNotChangeOutput) {
  std::vector<std::string> texts;
  std::map<std::string, double> scores;
  std::mt19937 rng(1);
  for (int i = 0; i < 21; ++i) {
    texts.push_back("passage " + std::to_string(i));
    scores[texts.back()] = static_cast<double>(rng() % 100) / 100.0;
  }
  const auto doc = make_document(texts);
  FixedScorer one(scores), eight(scores), parallel(scores);
  const auto r1 = cross_encoder_rank("q", doc.passages, one, {1, 1});
  const auto r8 = cross_encoder_rank("q", doc.passages, eight, {8, 1});
  const auto rp = cross_encoder_rank("q", doc.passages, parallel, {4, 3});
  EXPECT_EQ(r1, r8);
  EXPECT_EQ(r1, rp);
  EXPECT_EQ(one.max_batch, 1u);
  EXPECT_EQ(eight.max_batch, 8u);
  EXPECT_EQ(eight.calls, 3u);
}

TEST(CrossEncoder, OutOfRangeScoreIsProtocolError) {
  const auto doc = make_document({"alpha", "beta"});
  FixedScorer scorer({{"alpha", 0.2}, {"beta", 1.7}});
  EXPECT_THROW(cross_encoder_rank("q", doc.passages, scorer), ProtocolError);

  struct Short : PairScorer {
    std::vector<double> score(const std::vector<std::pair<std::string, std::string>>&) override {
      return {0.5};
    }
  } short_scorer;
  EXPECT_THROW(cross_encoder_rank("q", doc.passages, short_scorer), ProtocolError);
}

TEST(ClassifyEvidence, BoundariesAndRetrieverCheck) {
  RankedList r{"q", {{"a", 0.4}, {"b", 0.3}}, Retriever::cross_encoder};
  EXPECT_TRUE(classify_evidence(r).empty());
  r.retriever = Retriever::bm25;
  EXPECT_THROW(classify_evidence(r), ValidationError);
  r.retriever = Retriever::dual_encoder;
  EXPECT_THROW(classify_evidence(r), ValidationError);
}

TEST(ClassifyEvidence, MonotoneInThreshold) {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<RankedEntry> es;
    for (int i = 0; i < 10; ++i) es.push_back({"p" + std::to_string(i), (rng() % 101) / 100.0});
    const auto r = rank_by_score(es, Retriever::cross_encoder);
    std::set<std::string> prev = classify_evidence(r, 0.0);
    EXPECT_EQ(prev.size(), 10u);
    for (double t = 0.05; t <= 1.0001; t += 0.05) {
      const auto cur = classify_evidence(r, t);
      EXPECT_TRUE(std::includes(prev.begin(), prev.end(), cur.begin(), cur.end()));
      prev = cur;
    }
  }
}

namespace {

corpus::Document pairs_document(int n) {
  std::vector<std::string> texts;
  for (int i = 0; i < n; ++i)
    texts.push_back("passage " + std::to_string(i) + (i % 3 == 0 ? " seed lexicon" : " other words") +
                    (i % 4 == 0 ? " polarity" : ""));
  return make_document(texts);
}

corpus::QuestionRecord question_for(const corpus::Document& doc, std::set<std::string> gold) {
  corpus::QuestionRecord q;
  q.question_id = "q1";
  q.doc_id = doc.doc_id;
  q.text = "what is the seed lexicon polarity";
  q.gold_answers = {{corpus::AnswerType::extractive, "x"}};
  q.gold_evidence = std::move(gold);
  return q;
}

}  // namespace

TEST(TrainingPairs, RatioAndHardNegatives) {
  const auto doc = pairs_document(21);
  const auto idx = InvertedIndex::build(doc);
  const auto q = question_for(doc, {"p0005"});
  const auto pairs = build_training_pairs(q, doc, idx);
  ASSERT_EQ(pairs.size(), 5u);
  EXPECT_EQ(pairs[0].label, 1);
  EXPECT_EQ(pairs[0].passage_id, "p0005");

  std::vector<std::string> expected;
  for (const auto& e : bm25_rank(q.text, idx).entries)
    if (e.passage_id != "p0005" && expected.size() < 4) expected.push_back(e.passage_id);
  std::vector<std::string> got;
  for (std::size_t i = 1; i < 5; ++i) {
    EXPECT_EQ(pairs[i].label, 0);
    got.push_back(pairs[i].passage_id);
  }
  EXPECT_EQ(got, expected);
}

TEST(TrainingPairs, TwoGoldGiveTenDistinctPairs) {
  const auto doc = pairs_document(21);
  const auto idx = InvertedIndex::build(doc);
  for (const auto source : {NegativeSource::bm25_top, NegativeSource::random}) {
    TrainingPairConfig cfg;
    cfg.hard_negative_source = source;
    cfg.seed = 42;
    const auto pairs = build_training_pairs(question_for(doc, {"p0003", "p0010"}), doc, idx, cfg);
    ASSERT_EQ(pairs.size(), 10u);
    std::set<std::string> positives, seen;
    for (const auto& p : pairs) {
      if (p.label == 1) positives.insert(p.passage_id);
      EXPECT_TRUE(seen.insert(p.passage_id).second) << p.passage_id;
    }
    EXPECT_EQ(positives, (std::set<std::string>{"p0003", "p0010"}));
    const auto again = build_training_pairs(question_for(doc, {"p0003", "p0010"}), doc, idx, cfg);
    EXPECT_EQ(training_pairs_tsv(pairs), training_pairs_tsv(again));
  }
}

TEST(TrainingPairs, ShortageEmitsAllAndWarns) {
  const auto doc = pairs_document(3);
  const auto idx = InvertedIndex::build(doc);
  std::vector<std::string> warnings;
  const auto pairs = build_training_pairs(question_for(doc, {"p0000"}), doc, idx, {}, &warnings);
  EXPECT_EQ(pairs.size(), 3u);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(TrainingPairs, Serialization) {
  const auto doc = pairs_document(6);
  const auto pairs = build_training_pairs(question_for(doc, {"p0001"}), doc, InvertedIndex::build(doc));
  const auto tsv = training_pairs_tsv(pairs);
  EXPECT_EQ(tsv.substr(0, tsv.find('\n')), "q1\tp0001\t1");
  EXPECT_EQ(std::count(tsv.begin(), tsv.end(), '\n'), 5);
  const auto jsonl = training_pairs_jsonl(pairs);
  EXPECT_EQ(std::count(jsonl.begin(), jsonl.end(), '\n'), 5);
  EXPECT_NE(jsonl.find("\"label\":1"), std::string::npos);
}

TEST(TrainingPairs, RequiresGoldEvidence) {
  const auto doc = pairs_document(6);
  EXPECT_THROW(build_training_pairs(question_for(doc, {}), doc, InvertedIndex::build(doc)),
               ValidationError);
}
