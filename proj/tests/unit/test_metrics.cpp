#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include <json.hpp>

#include "docqa/error.hpp"
#include "docqa/metrics/f1_kernel.hpp"
#include "docqa/metrics/metrics.hpp"
#include "docqa/metrics/report.hpp"
#include "test_support.hpp"

using namespace docqa;
using namespace docqa::metrics;
using corpus::AnswerType;
using corpus::GoldAnswer;
using retrieve::RankedList;

namespace {

RankedList ranked_ids(int n) {
  RankedList r;
  r.retriever = retrieve::Retriever::bm25;
  for (int i = 0; i < n; ++i) r.entries.push_back({"p" + std::to_string(i + 1), double(n - i)});
  return r;
}

}  // namespace

TEST(F1Kernel, EmptySides) {
  EXPECT_EQ(f1_from_counts(0, 0, 0).f1, 1.0);
  EXPECT_EQ(f1_from_counts(0, 0, 3).f1, 0.0);
  EXPECT_EQ(f1_from_counts(0, 3, 0).f1, 0.0);
  const auto pr = f1_from_counts(2, 4, 2);
  EXPECT_DOUBLE_EQ(pr.precision, 0.5);
  EXPECT_DOUBLE_EQ(pr.recall, 1.0);
  EXPECT_DOUBLE_EQ(pr.f1, 2.0 / 3.0);
}

TEST(F1Kernel, TokenOverlapIsMultiset) {
  const auto pr = token_prf({"a", "a", "b"}, {"a", "c"});
  EXPECT_DOUBLE_EQ(pr.precision, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(pr.recall, 0.5);
}

TEST(AnswerF1, Examples) {
  const std::vector<GoldAnswer> refs{{AnswerType::abstractive,
                                      "a vocabulary of positive and negative predicates"}};
  EXPECT_EQ(answer_f1("a vocabulary of positive and negative predicates", refs).overall, 1.0);
  EXPECT_EQ(answer_f1("completely different words", refs).overall, 0.0);
  EXPECT_DOUBLE_EQ(answer_f1("positive and negative predicates", refs).overall, 0.8);
  EXPECT_EQ(answer_f1("", refs).overall, 0.0);

  const std::vector<GoldAnswer> yes{{AnswerType::boolean, "yes"}};
  EXPECT_EQ(answer_f1("yes", yes).overall, 1.0);
  EXPECT_EQ(answer_f1("no", yes).overall, 0.0);
  const std::vector<GoldAnswer> blank{{AnswerType::extractive, ""}};
  EXPECT_EQ(answer_f1("", blank).overall, 1.0);
  EXPECT_THROW(answer_f1("x", {}), ValidationError);
}

TEST(AnswerF1, PerTypeIsMaxWithinTypeAndOverallDominates) {
  const std::vector<GoldAnswer> refs{{AnswerType::extractive, "positive predicates"},
                                     {AnswerType::extractive, "negative predicates"},
                                     {AnswerType::abstractive, "seed words"},
                                     {AnswerType::boolean, "yes"}};
  const auto r = answer_f1("negative predicates", refs);
  EXPECT_EQ(r.per_type.at(AnswerType::extractive), 1.0);
  EXPECT_EQ(r.per_type.at(AnswerType::abstractive), 0.0);
  EXPECT_EQ(r.per_type.size(), 3u);
  EXPECT_EQ(r.overall, 1.0);

  std::mt19937 rng(10);
  const char* vocab[] = {"seed", "lexicon", "yes", "no", "polarity", "event"};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<GoldAnswer> gs;
    for (int i = 0, n = 1 + static_cast<int>(rng() % 4); i < n; ++i) {
      std::string t;
      for (int j = 0, m = static_cast<int>(rng() % 4); j < m; ++j) t += std::string(" ") + vocab[rng() % 6];
      gs.push_back({static_cast<AnswerType>(rng() % 3), t});
    }
    std::string pred;
    for (int j = 0, m = static_cast<int>(rng() % 4); j < m; ++j) pred += std::string(" ") + vocab[rng() % 6];
    const auto res = answer_f1(pred, gs);
    for (const auto& [t, v] : res.per_type) EXPECT_GE(res.overall, v);
    auto shuffled = gs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto again = answer_f1(pred, shuffled);
    EXPECT_EQ(again.overall, res.overall);
    EXPECT_EQ(again.per_type, res.per_type);
  }
}

TEST(EvidenceF1, Examples) {
  EXPECT_DOUBLE_EQ(evidence_f1({"p1", "p2"}, {"p2", "p3"}), 0.5);
  EXPECT_EQ(evidence_f1({"p1", "p2"}, {"p1", "p2"}), 1.0);
  EXPECT_EQ(evidence_f1({"p1"}, {"p2"}), 0.0);
  EXPECT_EQ(evidence_f1({}, {}), 1.0);
  EXPECT_EQ(evidence_f1({}, {"p2"}), 0.0);
}

TEST(RecallAtPercent, HandCases) {
  EXPECT_EQ(top_percent_cutoff(5, 40), 2u);
  EXPECT_EQ(top_percent_cutoff(1, 10), 1u);
  EXPECT_EQ(top_percent_cutoff(10, 10), 1u);
  EXPECT_EQ(top_percent_cutoff(20, 7), 2u);
  EXPECT_EQ(top_percent_cutoff(100, 7), 7u);
  EXPECT_THROW(top_percent_cutoff(0, 7), ValidationError);
  EXPECT_THROW(top_percent_cutoff(101, 7), ValidationError);

  auto r40 = ranked_ids(40);
  std::swap(r40.entries[1].passage_id, r40.entries[6].passage_id);  // p7 at rank 2
  EXPECT_EQ(recall_at_percent(r40, {"p7"}, 5), 1.0);

  const auto r10 = ranked_ids(10);
  EXPECT_EQ(recall_at_percent(r10, {"p1", "p5"}, 1), 0.5);
  EXPECT_EQ(recall_at_percent(r10, {"p1", "p5", "p10"}, 100), 1.0);
  EXPECT_FALSE(recall_at_percent(r10, {}, 5).has_value());
}

TEST(RecallAtPercent, MonotoneInK) {
  std::mt19937 rng(21);
  const std::vector<double> ks{1, 5, 10, 20, 100};
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 80);
    auto r = ranked_ids(n);
    std::shuffle(r.entries.begin(), r.entries.end(), rng);
    std::set<std::string> gold;
    for (int i = 0, g = 1 + static_cast<int>(rng() % 4); i < g; ++i)
      gold.insert("p" + std::to_string(1 + rng() % n));
    double prev = -1;
    for (const double k : ks) {
      const double v = *recall_at_percent(r, gold, k);
      EXPECT_GE(v, prev);
      prev = v;
    }
    EXPECT_EQ(prev, 1.0);
  }
}

TEST(Aggregate, Groupings) {
  const std::vector<QuestionValue> one{{"d1", 0.37}};
  EXPECT_EQ(aggregate(one, Grouping::by_document_then_mean), 0.37);
  EXPECT_EQ(aggregate(one, Grouping::flat_mean), 0.37);

  const std::vector<QuestionValue> vs{{"d1", 1.0}, {"d2", 0.0}, {"d1", 1.0}, {"d1", 1.0}};
  EXPECT_DOUBLE_EQ(aggregate(vs, Grouping::by_document_then_mean), 0.5);
  EXPECT_DOUBLE_EQ(aggregate(vs, Grouping::flat_mean), 0.75);
  EXPECT_THROW(aggregate({}, Grouping::flat_mean), ValidationError);
}

TEST(EvalReport, JsonAndTextRenderEveryCell) {
  EvalReport r;
  r.splits = {"validation", "test"};
  r.retriever = "bm25";
  r.answerer = "reference";
  r.recall_grouping = "by_document_then_mean";
  r.evidence_rule = "top-k";
  for (const auto& s : r.splits) {
    for (const auto t : {AnswerType::extractive, AnswerType::abstractive, AnswerType::boolean}) {
      r.per_type[t][s] = 0.25;
      r.per_type_count[t][s] = 4;
    }
    r.overall[s] = 0.5;
    r.best_of_k[s] = 0.6;
    r.evidence_f1[s] = 0.125;
    for (const double k : kRecallPercents) r.recall_at[s][k] = k / 100;
    r.coverage[s] = {10, 8, 1};
  }
  const auto j = nlohmann::json::parse(r.to_json());
  EXPECT_EQ(j["retriever"], "bm25");
  EXPECT_EQ(r.to_json(), r.to_json());
  const auto text = r.to_text();
  EXPECT_NE(text.find("12.50"), std::string::npos);
  EXPECT_NE(text.find("by_document_then_mean"), std::string::npos);
  EXPECT_NE(text.find("20.00"), std::string::npos);
}
