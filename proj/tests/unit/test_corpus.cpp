#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include <unistd.h>

#include "docqa/corpus/corpus.hpp"
#include "docqa/corpus/normalize.hpp"
#include "docqa/error.hpp"
#include "test_support.hpp"

using namespace docqa;
using namespace docqa::corpus;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("docqa-corpus-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(NormalizeTokens, DropsArticlesPunctuationAndCase) {
  EXPECT_EQ(normalize_tokens("The seed Lexicon."), (std::vector<std::string>{"seed", "lexicon"}));
  EXPECT_TRUE(normalize_tokens("").empty());
  EXPECT_EQ(normalize_tokens("a vocabulary of positive and negative predicates"),
            (std::vector<std::string>{"vocabulary", "of", "positive", "and", "negative",
                                      "predicates"}));
}

TEST(NormalizeTokens, PunctuationIsRemovedNotSplit) {
  EXPECT_EQ(normalize_tokens("state-of-the-art (BiGRU)"),
            (std::vector<std::string>{"stateoftheart", "bigru"}));
  EXPECT_EQ(normalize_tokens("An  apple,\tthe\npear"), (std::vector<std::string>{"apple", "pear"}));
  // Non-ASCII bytes pass through untouched.
  EXPECT_EQ(normalize_tokens("Caf\xc3\xa9 THE"), (std::vector<std::string>{"caf\xc3\xa9"}));
}

TEST(NormalizeTokens, IsIdempotentOnRandomText) {
  std::mt19937 rng(7);
  const std::string alphabet = "abcdeTHE AN a.,;!?-()'\"\t\n xyz";
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    const int len = static_cast<int>(rng() % 40);
    for (int i = 0; i < len; ++i) s.push_back(alphabet[rng() % alphabet.size()]);
    const auto once = normalize_tokens(s);
    EXPECT_EQ(normalize_tokens(join_tokens(once)), once) << "input: " << s;
  }
}

TEST(RegisterDocument, AssignsStableIds) {
  std::vector<Passage> ps{{"", "Only passage.", PassageCategory::paragraph, {}, {}}};
  const auto a = register_document(ps, "t");
  const auto b = register_document(ps, "t");
  ASSERT_EQ(a.passages.size(), 1u);
  EXPECT_EQ(a.doc_id, b.doc_id);
  EXPECT_EQ(a.passages[0].passage_id, b.passages[0].passage_id);
  // Different content, different id.
  ps[0].text = "Other passage.";
  EXPECT_NE(register_document(ps, "t").doc_id, a.doc_id);
}

TEST(RegisterDocument, RejectsEmptyInput) {
  EXPECT_THROW(register_document({}, "t"), ValidationError);
  std::vector<Passage> blank{{"", "  \n ", PassageCategory::paragraph, {}, {}}};
  EXPECT_THROW(register_document(blank, "t"), ValidationError);
}

TEST(RegisterDocument, PreservesOrderOfManyPassages) {
  std::vector<Passage> ps;
  for (int i = 0; i < 500; ++i)
    ps.push_back({"", "passage number " + std::to_string(i), PassageCategory::paragraph, {}, {}});
  const auto doc = register_document(ps, "big");
  ASSERT_EQ(doc.passages.size(), 500u);
  std::set<std::string> ids;
  for (int i = 0; i < 500; ++i) {
    EXPECT_EQ(doc.passages[i].text, "passage number " + std::to_string(i));
    ids.insert(doc.passages[i].passage_id);
  }
  EXPECT_EQ(ids.size(), 500u);
}

TEST(LoadQasper, HandCountedFixture) {
  const auto ds = parse_qasper(fixtures::kQasperFixture);
  ASSERT_EQ(ds.documents.size(), 2u);
  ASSERT_EQ(ds.questions.size(), 2u);
  EXPECT_EQ(ds.questions[0].question_id, "q1");
  EXPECT_EQ(ds.questions[1].question_id, "q2");

  const auto& a = ds.documents[0];
  EXPECT_EQ(a.doc_id, "paper-a");
  EXPECT_EQ(a.source, DocumentSource::dataset_text);
  // 3 non-blank paragraphs + 1 caption
  ASSERT_EQ(a.passages.size(), 4u);
  EXPECT_EQ(a.passages[3].category, PassageCategory::caption);
}

TEST(LoadQasper, TypesAnswersAndDropsUnanswerable) {
  const auto ds = parse_qasper(fixtures::kQasperFixture);
  const auto& q1 = ds.questions[0];
  ASSERT_EQ(q1.gold_answers.size(), 2u);
  EXPECT_EQ(q1.gold_answers[0].answer_type, AnswerType::extractive);
  EXPECT_EQ(q1.gold_answers[0].text, "positive and negative predicates");
  EXPECT_EQ(q1.gold_answers[1].answer_type, AnswerType::abstractive);

  const auto& q2 = ds.questions[1];
  ASSERT_EQ(q2.gold_answers.size(), 1u);
  EXPECT_EQ(q2.gold_answers[0], (GoldAnswer{AnswerType::boolean, "yes"}));
}

TEST(LoadQasper, ResolvesEvidenceAndWarnsOnMisses) {
  const auto ds = parse_qasper(fixtures::kQasperFixture);
  const auto& doc = ds.documents[0];
  const auto& q1 = ds.questions[0];
  // Paragraph by exact text, caption after stripping the float marker.
  EXPECT_EQ(q1.gold_evidence, (std::set<std::string>{doc.passages[0].passage_id,
                                                       doc.passages[3].passage_id}));
  EXPECT_EQ(q1.unresolved_evidence, 0u);

  const auto& q2 = ds.questions[1];
  EXPECT_EQ(q2.gold_evidence, (std::set<std::string>{doc.passages[2].passage_id}));
  EXPECT_EQ(q2.unresolved_evidence, 1u);
  ASSERT_EQ(ds.warnings.size(), 1u);
  EXPECT_NE(ds.warnings[0].find("q2"), std::string::npos);
}

TEST(LoadQasper, NoUnanswerableSurvivesAndEvidenceIsConsistent) {
  const auto ds = parse_qasper(fixtures::kQasperFixture);
  for (const auto& q : ds.questions) {
    EXPECT_FALSE(q.gold_answers.empty());
    const auto& doc = *std::find_if(ds.documents.begin(), ds.documents.end(),
                                    [&](const Document& d) { return d.doc_id == q.doc_id; });
    for (const auto& id : q.gold_evidence) EXPECT_TRUE(doc.find(id).has_value()) << id;
  }
}

TEST(MatchEvidence, FallsBackToTokenF1AboveThreshold) {
  std::vector<Passage> ps{
      {"", "alpha beta gamma delta epsilon zeta eta theta iota kappa lambda", PassageCategory::paragraph, {}, {}},
      {"", "something else entirely", PassageCategory::paragraph, {}, {}}};
  const auto doc = register_document(ps, "t");
  // one token dropped out of eleven: F1 = 20/21 > 0.9
  EXPECT_EQ(match_evidence(doc, "alpha beta gamma delta epsilon zeta eta theta iota kappa"),
            doc.passages[0].passage_id);
  // half the tokens: below threshold
  EXPECT_FALSE(match_evidence(doc, "alpha beta gamma delta epsilon").has_value());
}

TEST(LoadQasper, UnreadableFileNamesThePath) {
  try {
    load_qasper("/nonexistent/qasper-dev.json", Split::validation);
    FAIL() << "expected IngestError";
  } catch (const IngestError& e) {
    EXPECT_EQ(e.path(), "/nonexistent/qasper-dev.json");
  }
}

TEST(LoadQasper, MalformedJsonIsAnIngestError) {
  EXPECT_THROW(parse_qasper("{not json"), IngestError);
  EXPECT_THROW(parse_qasper("[1,2,3]"), IngestError);
}

TEST(CorpusFiles, RoundTripAndDeterministicBytes) {
  const auto dir = temp_dir("roundtrip");
  const auto ds = parse_qasper(fixtures::kQasperFixture);
  write_corpus(dir / "a.jsonl", ds.documents);
  write_questions(dir / "a.json", ds.questions);
  EXPECT_EQ(read_corpus(dir / "a.jsonl"), ds.documents);
  EXPECT_EQ(read_questions(dir / "a.json"), ds.questions);

  // Second ingestion of the same input writes identical bytes.
  const auto again = parse_qasper(fixtures::kQasperFixture);
  write_corpus(dir / "b.jsonl", again.documents);
  write_questions(dir / "b.json", again.questions);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  EXPECT_EQ(slurp(dir / "a.jsonl"), slurp(dir / "b.jsonl"));
  EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
  fs::remove_all(dir);
}
