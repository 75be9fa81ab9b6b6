#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "docqa/corpus/types.hpp"
#include "docqa/retrieve/ranking.hpp"

namespace docqa::comprehend {

struct WeakExample {
  std::string question_id;
  std::string question;
  std::string passage_id;
  std::string context;
  std::string target;
  corpus::AnswerType target_type = corpus::AnswerType::extractive;
  int sampled_rank = 1;  // 1-based position in the ranked list
  double sample_prob = 0;
};

inline constexpr double kSamplingEpsilon = 1e-6;

// p_i = (s_i + eps) / sum_j (s_j + eps). Scores must be non-negative.
std::vector<double> sampling_distribution(std::span<const double> scores,
                                          double epsilon = kSamplingEpsilon);

// Draws `n_samples` ranked positions (0-based) from the distribution above.
std::vector<std::size_t> sample_ranks(std::span<const double> scores, std::size_t n_samples,
                                      std::uint64_t seed);

// Finetuning examples: contexts drawn in proportion to retrieval score, each
// paired with a gold answer. Gold answers are cycled in type order
// (extractive, abstractive, boolean).
std::vector<WeakExample> weak_supervision_sampler(const corpus::QuestionRecord& q,
                                                  const retrieve::RankedList& ranked,
                                                  const corpus::Document& doc,
                                                  std::size_t n_samples, std::uint64_t seed);

std::string weak_examples_jsonl(const std::vector<WeakExample>& examples);

}  // namespace docqa::comprehend
