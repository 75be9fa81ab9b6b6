#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "docqa/corpus/types.hpp"
#include "docqa/retrieve/ranking.hpp"

namespace docqa::metrics {

struct AnswerF1 {
  double overall = 0;
  // Only types present among the references appear.
  std::map<corpus::AnswerType, double> per_type;
};

// Token F1 against every reference; per type is the max over references of
// that type, overall the max over all of them.
AnswerF1 answer_f1(std::string_view prediction, std::span<const corpus::GoldAnswer> references);

double evidence_f1(const std::set<std::string>& predicted, const std::set<std::string>& gold);

// Number of passages inspected for K%: max(1, ceil(K/100 * N)).
std::size_t top_percent_cutoff(double k_percent, std::size_t n_passages);

// |gold ∩ top-M| / |gold|; nullopt when gold is empty so the question can be
// left out of aggregation.
std::optional<double> recall_at_percent(const retrieve::RankedList& ranked,
                                        const std::set<std::string>& gold, double k_percent);

enum class Grouping { by_document_then_mean, flat_mean };
std::string_view to_string(Grouping g);

struct QuestionValue {
  std::string doc_id;
  double value = 0;
};

double aggregate(std::span<const QuestionValue> values, Grouping grouping);

}  // namespace docqa::metrics
