#pragma once

#include <map>
#include <string>
#include <vector>

#include "docqa/corpus/types.hpp"

namespace docqa::metrics {

inline const std::vector<double> kRecallPercents = {1, 5, 10, 20};

struct Coverage {
  std::size_t questions = 0;
  // Questions with at least one resolved gold evidence passage.
  std::size_t with_evidence = 0;
  // Questions with gold evidence strings that matched no passage.
  std::size_t with_unresolved = 0;
};

// Cell values are fractions in [0,1]; the text table renders them x100.
struct EvalReport {
  std::vector<std::string> splits;
  std::string retriever;
  std::string answerer;
  int k = 3;
  std::string recall_grouping;
  std::string evidence_rule;
  bool answers_evaluated = true;

  std::map<corpus::AnswerType, std::map<std::string, double>> per_type;
  std::map<corpus::AnswerType, std::map<std::string, std::size_t>> per_type_count;
  std::map<std::string, double> overall;
  // Best candidate of the K against gold, rather than the selected one.
  std::map<std::string, double> best_of_k;
  std::map<std::string, double> evidence_f1;
  std::map<std::string, std::map<double, double>> recall_at;
  std::map<std::string, Coverage> coverage;

  std::string to_json() const;
  std::string to_text() const;
};

}  // namespace docqa::metrics
