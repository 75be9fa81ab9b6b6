#include "docqa/retrieve/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "docqa/corpus/normalize.hpp"
#include "docqa/error.hpp"

namespace docqa::retrieve {

std::string_view to_string(Retriever r) {
  switch (r) {
    case Retriever::bm25: return "bm25";
    case Retriever::dual_encoder: return "dual_encoder";
    case Retriever::cross_encoder: return "cross_encoder";
  }
  return "bm25";
}

Retriever retriever_from_string(std::string_view s) {
  if (s == "bm25") return Retriever::bm25;
  if (s == "dual_encoder" || s == "dpr") return Retriever::dual_encoder;
  if (s == "cross_encoder" || s == "electra") return Retriever::cross_encoder;
  throw ValidationError("unknown retriever '" + std::string(s) + "'");
}

RankedList rank_by_score(std::vector<RankedEntry> doc_order, Retriever retriever) {
  std::stable_sort(doc_order.begin(), doc_order.end(),
                   [](const RankedEntry& a, const RankedEntry& b) { return a.score > b.score; });
  RankedList out;
  out.entries = std::move(doc_order);
  out.retriever = retriever;
  return out;
}

void Bm25Params::validate() const {
  if (!(k1 >= 0)) throw ValidationError("bm25 k1 must be >= 0");
  if (!(b >= 0 && b <= 1)) throw ValidationError("bm25 b must lie in [0,1]");
}

RankedList bm25_rank(std::string_view question, const InvertedIndex& index,
                     const Bm25Params& params) {
  params.validate();
  const auto n = static_cast<double>(index.passage_count());
  std::vector<double> scores(index.passage_count(), 0.0);
  // Repeated query terms contribute once per occurrence.
  for (const auto& term : corpus::normalize_tokens(question)) {
    const auto postings = index.postings(term);
    if (postings.empty()) continue;
    const auto df = static_cast<double>(postings.size());
    const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    for (const auto& p : postings) {
      const double tf = p.term_frequency;
      const double norm =
          params.k1 * (1.0 - params.b + params.b * index.length(p.passage) / index.avg_len());
      scores[p.passage] += idf * tf * (params.k1 + 1.0) / (tf + norm);
    }
  }
  std::vector<RankedEntry> entries;
  entries.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) entries.push_back({index.passage_id(i), scores[i]});
  return rank_by_score(std::move(entries), Retriever::bm25);
}

RankedList dual_encoder_rank(std::span<const double> query,
                             std::span<const std::pair<std::string, std::vector<double>>> passages) {
  std::vector<RankedEntry> entries;
  entries.reserve(passages.size());
  for (const auto& [id, vec] : passages) {
    if (vec.size() != query.size())
      throw ValidationError("embedding for passage '" + id + "' has dimension " +
                            std::to_string(vec.size()) + ", expected " +
                            std::to_string(query.size()));
    double dot = 0;
    for (std::size_t d = 0; d < vec.size(); ++d) dot += query[d] * vec[d];
    entries.push_back({id, dot});
  }
  return rank_by_score(std::move(entries), Retriever::dual_encoder);
}

RankedList dual_encoder_rank(std::string_view question, const corpus::Document& doc,
                             Embedder& embedder) {
  std::vector<std::string> texts;
  texts.reserve(doc.passages.size() + 1);
  texts.emplace_back(question);
  for (const auto& p : doc.passages) texts.push_back(p.text);
  const auto vectors = embedder.embed(texts);
  if (vectors.size() != texts.size())
    throw ProtocolError("embedding backend returned " + std::to_string(vectors.size()) +
                        " vectors for " + std::to_string(texts.size()) + " texts");
  std::vector<std::pair<std::string, std::vector<double>>> passages;
  for (std::size_t i = 0; i < doc.passages.size(); ++i)
    passages.emplace_back(doc.passages[i].passage_id, vectors[i + 1]);
  return dual_encoder_rank(vectors[0], passages);
}

RankedList cross_encoder_rank(std::string_view question, std::span<const corpus::Passage> passages,
                              PairScorer& scorer, const CrossEncoderOptions& options) {
  const std::size_t batch = std::max<std::size_t>(1, options.batch_size);
  std::vector<std::vector<std::pair<std::string, std::string>>> batches;
  for (std::size_t i = 0; i < passages.size(); i += batch) {
    auto& b = batches.emplace_back();
    for (std::size_t j = i; j < std::min(passages.size(), i + batch); ++j)
      b.emplace_back(std::string(question), passages[j].text);
  }

  std::vector<std::vector<double>> results(batches.size());
  const std::size_t width = std::max<std::size_t>(1, options.max_concurrency);
  for (std::size_t start = 0; start < batches.size(); start += width) {
    const std::size_t stop = std::min(batches.size(), start + width);
    if (width == 1) {
      results[start] = scorer.score(batches[start]);
      continue;
    }
    std::vector<std::future<std::vector<double>>> inflight;
    for (std::size_t i = start; i < stop; ++i)
      inflight.push_back(std::async(std::launch::async, [&, i] { return scorer.score(batches[i]); }));
    for (std::size_t i = start; i < stop; ++i) results[i] = inflight[i - start].get();
  }

  std::vector<RankedEntry> entries;
  entries.reserve(passages.size());
  for (std::size_t b = 0; b < batches.size(); ++b) {
    if (results[b].size() != batches[b].size())
      throw ProtocolError("scoring backend returned " + std::to_string(results[b].size()) +
                          " scores for " + std::to_string(batches[b].size()) + " pairs");
    for (std::size_t j = 0; j < results[b].size(); ++j) {
      const double s = results[b][j];
      const auto& p = passages[b * batch + j];
      if (!(s >= 0.0 && s <= 1.0))
        throw ProtocolError("score " + std::to_string(s) + " for passage '" + p.passage_id +
                            "' is outside [0,1]");
      entries.push_back({p.passage_id, s});
    }
  }
  return rank_by_score(std::move(entries), Retriever::cross_encoder);
}

std::set<std::string> classify_evidence(const RankedList& ranked, double threshold) {
  if (ranked.retriever != Retriever::cross_encoder)
    throw ValidationError(std::string(to_string(ranked.retriever)) +
                          " scores are not probabilities; evidence classification needs "
                          "cross_encoder scores");
  std::set<std::string> out;
  for (const auto& e : ranked.entries)
    if (e.score >= threshold) out.insert(e.passage_id);
  return out;
}

}  // namespace docqa::retrieve
