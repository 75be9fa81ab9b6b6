#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "docqa/corpus/types.hpp"
#include "docqa/retrieve/ranking.hpp"

namespace docqa::comprehend {

enum class CandidateType { extractive, abstractive, boolean, no_answer };
std::string_view to_string(CandidateType t);
CandidateType candidate_type_from_string(std::string_view s);

struct AnswerCandidate {
  std::string text;  // empty for no_answer, "yes"/"no" for boolean
  CandidateType answer_type = CandidateType::no_answer;
  double confidence = 0;
  std::string passage_id;
  int rank_of_context = 1;
  // The backend gave no confidence and 0.5 was substituted.
  bool confidence_defaulted = false;

  bool operator==(const AnswerCandidate&) const = default;
};

// Answers one question from one context.
class Answerer {
 public:
  virtual ~Answerer() = default;
  virtual AnswerCandidate answer(std::string_view question, std::string_view context) = 0;
};

// Raw output of a text generation backend.
struct Generation {
  std::string answer;
  std::optional<double> confidence;
};

class Generator {
 public:
  virtual ~Generator() = default;
  virtual Generation generate(std::string_view question, std::string_view context) = 0;
};

// Types a generated answer: empty or "no answer" -> no_answer, yes/no ->
// boolean, a span found verbatim (case-insensitive) in the context ->
// extractive, anything else -> abstractive. Missing confidence becomes 0.5.
AnswerCandidate classify_generation(const Generation& g, std::string_view context);

// Adapts a Generator to the Answerer interface.
class GeneratorAnswerer final : public Answerer {
 public:
  explicit GeneratorAnswerer(Generator& backend) : backend_(backend) {}
  AnswerCandidate answer(std::string_view question, std::string_view context) override;

 private:
  Generator& backend_;
};

// Deterministic answerer needing no model.
AnswerCandidate reference_answerer(std::string_view question, std::string_view context);

class ReferenceAnswerer final : public Answerer {
 public:
  AnswerCandidate answer(std::string_view question, std::string_view context) override {
    return reference_answerer(question, context);
  }
};

// One candidate per top-min(k, |ranked|) context. A context whose answerer
// call throws yields a zero-confidence no_answer (and a warning); if every
// call throws the last error is rethrown as a StageError.
std::vector<AnswerCandidate> answer_with_contexts(std::string_view question,
                                                  const retrieve::RankedList& ranked,
                                                  const corpus::Document& doc, int k,
                                                  Answerer& answerer,
                                                  std::vector<std::string>* warnings = nullptr);

// Highest confidence among answers; ties go to the better-ranked context.
// Falls back to the rank-1 no_answer when nothing was answered.
AnswerCandidate select_answer(const std::vector<AnswerCandidate>& candidates);

}  // namespace docqa::comprehend
