#include "docqa/comprehend/answer.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "docqa/corpus/normalize.hpp"
#include "docqa/error.hpp"
#include "docqa/metrics/f1_kernel.hpp"

namespace docqa::comprehend {
namespace {

const std::set<std::string, std::less<>> kBooleanLeads = {
    "is", "are", "do", "does", "did", "can", "was", "were", "has", "have"};

// Function words ignored when matching a question against a context.
const std::set<std::string, std::less<>> kStopwords = {
    "what", "which", "who",  "whom", "whose", "when",  "where", "why",   "how",   "is",
    "are",  "was",   "were", "be",   "been",  "being", "do",    "does",  "did",   "can",
    "could", "should", "would", "will", "shall", "may",  "might", "has",   "have",  "had",
    "of",   "in",    "on",   "for",  "to",    "and",   "or",    "by",    "with",  "from",
    "at",   "as",    "that", "this", "these", "those", "it",    "its",   "they",  "their",
    "there", "any",  "some", "such", "into",  "than",  "then",  "them",  "we",    "our",
    "you",  "your",  "he",   "she",  "his",   "her",   "not",   "if",    "so",    "also",
    "used", "use",   "uses", "using"};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> content_tokens(std::string_view text) {
  auto toks = corpus::normalize_tokens(text);
  std::erase_if(toks, [](const std::string& t) { return kStopwords.contains(t); });
  return toks;
}

std::vector<std::string> split_sentences(std::string_view context) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < context.size(); ++i) {
    const char c = context[i];
    const bool terminal = (c == '.' || c == '!' || c == '?') &&
                          (i + 1 == context.size() || std::isspace(static_cast<unsigned char>(context[i + 1])));
    if (terminal || c == '\n') {
      auto s = trim(context.substr(start, i + 1 - start));
      if (!s.empty()) out.push_back(std::move(s));
      start = i + 1;
    }
  }
  auto tail = trim(context.substr(std::min(start, context.size())));
  if (!tail.empty()) out.push_back(std::move(tail));
  return out;
}

AnswerCandidate no_answer() { return AnswerCandidate{}; }

}  // namespace

std::string_view to_string(CandidateType t) {
  switch (t) {
    case CandidateType::extractive: return "extractive";
    case CandidateType::abstractive: return "abstractive";
    case CandidateType::boolean: return "boolean";
    case CandidateType::no_answer: return "no_answer";
  }
  return "no_answer";
}

CandidateType candidate_type_from_string(std::string_view s) {
  if (s == "extractive") return CandidateType::extractive;
  if (s == "abstractive") return CandidateType::abstractive;
  if (s == "boolean") return CandidateType::boolean;
  if (s == "no_answer") return CandidateType::no_answer;
  throw ValidationError("unknown candidate type '" + std::string(s) + "'");
}

AnswerCandidate classify_generation(const Generation& g, std::string_view context) {
  AnswerCandidate c;
  c.confidence_defaulted = !g.confidence.has_value();
  c.confidence = std::clamp(g.confidence.value_or(0.5), 0.0, 1.0);
  const auto tokens = corpus::normalize_tokens(g.answer);
  const auto joined = corpus::join_tokens(tokens);
  if (tokens.empty() || joined == "no answer" || joined == "unanswerable") {
    c.answer_type = CandidateType::no_answer;
    c.text.clear();
    return c;
  }
  if (joined == "yes" || joined == "no") {
    c.answer_type = CandidateType::boolean;
    c.text = joined;
    return c;
  }
  c.text = trim(g.answer);
  c.answer_type = lower(context).find(lower(c.text)) != std::string::npos
                      ? CandidateType::extractive
                      : CandidateType::abstractive;
  return c;
}

AnswerCandidate GeneratorAnswerer::answer(std::string_view question, std::string_view context) {
  return classify_generation(backend_.generate(question, context), context);
}

AnswerCandidate reference_answerer(std::string_view question, std::string_view context) {
  if (trim(context).empty()) return no_answer();

  const auto q_tokens = corpus::normalize_tokens(question);
  const auto content = content_tokens(question);

  if (!q_tokens.empty() && kBooleanLeads.contains(q_tokens.front())) {
    const auto ctx = corpus::normalize_tokens(context);
    const std::set<std::string> ctx_set(ctx.begin(), ctx.end());
    const std::set<std::string> wanted(content.begin(), content.end());
    std::size_t hit = 0;
    for (const auto& t : wanted) hit += ctx_set.count(t);
    const double frac = wanted.empty() ? 0.0 : static_cast<double>(hit) / wanted.size();
    AnswerCandidate c;
    c.answer_type = CandidateType::boolean;
    c.text = !wanted.empty() && 2 * hit >= wanted.size() ? "yes" : "no";
    c.confidence = frac;
    return c;
  }

  double best = 0;
  std::string best_sentence;
  for (const auto& s : split_sentences(context)) {
    const double f1 = metrics::token_prf(corpus::normalize_tokens(s), content).f1;
    if (f1 > best) {
      best = f1;
      best_sentence = s;
    }
  }
  if (best_sentence.empty()) return no_answer();
  AnswerCandidate c;
  c.answer_type = CandidateType::extractive;
  c.text = std::move(best_sentence);
  c.confidence = best;
  return c;
}

std::vector<AnswerCandidate> answer_with_contexts(std::string_view question,
                                                  const retrieve::RankedList& ranked,
                                                  const corpus::Document& doc, int k,
                                                  Answerer& answerer,
                                                  std::vector<std::string>* warnings) {
  if (k < 1) throw ValidationError("k must be >= 1");
  if (ranked.entries.empty()) throw ValidationError("ranked list is empty");
  const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(k), ranked.entries.size());
  std::vector<AnswerCandidate> out;
  std::size_t failures = 0;
  std::string last_error;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& entry = ranked.entries[i];
    AnswerCandidate c;
    try {
      c = answerer.answer(question, doc.passage(entry.passage_id).text);
    } catch (const std::exception& e) {
      ++failures;
      last_error = e.what();
      if (warnings)
        warnings->push_back("answerer failed on context " + entry.passage_id + ": " + e.what());
      c = no_answer();
    }
    c.passage_id = entry.passage_id;
    c.rank_of_context = static_cast<int>(i + 1);
    out.push_back(std::move(c));
  }
  if (failures == n) throw StageError("comprehend", last_error);
  return out;
}

AnswerCandidate select_answer(const std::vector<AnswerCandidate>& candidates) {
  if (candidates.empty()) throw ValidationError("no answer candidates to select from");
  const AnswerCandidate* best = nullptr;
  const AnswerCandidate* top_no_answer = nullptr;
  for (const auto& c : candidates) {
    if (c.answer_type == CandidateType::no_answer) {
      if (!top_no_answer || c.rank_of_context < top_no_answer->rank_of_context) top_no_answer = &c;
      continue;
    }
    if (!best || c.confidence > best->confidence ||
        (c.confidence == best->confidence && c.rank_of_context < best->rank_of_context))
      best = &c;
  }
  return best ? *best : *top_no_answer;
}

}  // namespace docqa::comprehend
