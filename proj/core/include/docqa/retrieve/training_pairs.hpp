#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "docqa/corpus/types.hpp"
#include "docqa/retrieve/index.hpp"
#include "docqa/retrieve/ranking.hpp"

namespace docqa::retrieve {

enum class NegativeSource { bm25_top, random };

struct TrainingPairConfig {
  int negatives_per_positive = 4;
  NegativeSource hard_negative_source = NegativeSource::bm25_top;
  std::uint64_t seed = 0;
  Bm25Params bm25;
};

struct TrainingPair {
  std::string question_id;
  std::string question;
  std::string passage_id;
  std::string passage;
  int label = 0;
};

// Each gold passage (document order) followed by its share of negatives.
// Negatives are distinct non-gold passages, by default the top BM25 hits for
// the question. When the document runs short, every available negative is
// used and a warning is appended to `warnings` if given.
std::vector<TrainingPair> build_training_pairs(const corpus::QuestionRecord& q,
                                               const corpus::Document& doc,
                                               const InvertedIndex& index,
                                               const TrainingPairConfig& cfg = {},
                                               std::vector<std::string>* warnings = nullptr);

// question_id \t passage_id \t label
std::string training_pairs_tsv(const std::vector<TrainingPair>& pairs);
// One JSON object per line with full texts.
std::string training_pairs_jsonl(const std::vector<TrainingPair>& pairs);

}  // namespace docqa::retrieve
