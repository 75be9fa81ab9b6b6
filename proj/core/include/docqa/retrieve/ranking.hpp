#pragma once

#include <functional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "docqa/corpus/types.hpp"
#include "docqa/retrieve/index.hpp"

namespace docqa::retrieve {

enum class Retriever { bm25, dual_encoder, cross_encoder };
std::string_view to_string(Retriever r);
Retriever retriever_from_string(std::string_view s);

struct RankedEntry {
  std::string passage_id;
  double score = 0;
  bool operator==(const RankedEntry&) const = default;
};

// Scores non-increasing; equal scores keep document order.
struct RankedList {
  std::string question_id;
  std::vector<RankedEntry> entries;
  Retriever retriever = Retriever::bm25;

  bool operator==(const RankedList&) const = default;
};

// Sorts (passage_id, score) pairs given in document order into a RankedList.
RankedList rank_by_score(std::vector<RankedEntry> doc_order, Retriever retriever);

struct Bm25Params {
  double k1 = 0.9;
  double b = 0.4;
  void validate() const;
};

// Okapi BM25 with the non-negative idf ln(1 + (N - n + 0.5) / (n + 0.5)),
// over every passage of the indexed document.
RankedList bm25_rank(std::string_view question, const InvertedIndex& index,
                     const Bm25Params& params = {});

// Inner-product ranking. `passages` is in document order.
RankedList dual_encoder_rank(std::span<const double> query,
                             std::span<const std::pair<std::string, std::vector<double>>> passages);

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) = 0;
};

// Embeds the question and every passage, then ranks by inner product.
RankedList dual_encoder_rank(std::string_view question, const corpus::Document& doc,
                             Embedder& embedder);

// Scores (question, passage) pairs with a relevance probability in [0,1].
class PairScorer {
 public:
  virtual ~PairScorer() = default;
  virtual std::vector<double> score(
      const std::vector<std::pair<std::string, std::string>>& pairs) = 0;
};

struct CrossEncoderOptions {
  std::size_t batch_size = 8;
  std::size_t max_concurrency = 1;
};

RankedList cross_encoder_rank(std::string_view question, std::span<const corpus::Passage> passages,
                              PairScorer& scorer, const CrossEncoderOptions& options = {});

// Passages whose relevance probability is >= threshold. Only cross-encoder
// scores are probabilities; other retrievers are rejected.
std::set<std::string> classify_evidence(const RankedList& ranked, double threshold = 0.5);

}  // namespace docqa::retrieve
