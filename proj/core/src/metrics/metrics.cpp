#include "docqa/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "docqa/corpus/normalize.hpp"
#include "docqa/error.hpp"
#include "docqa/metrics/f1_kernel.hpp"

namespace docqa::metrics {

AnswerF1 answer_f1(std::string_view prediction, std::span<const corpus::GoldAnswer> references) {
  if (references.empty()) throw ValidationError("answer_f1 needs at least one reference");
  const auto pred = corpus::normalize_tokens(prediction);
  AnswerF1 out;
  for (const auto& ref : references) {
    const double f1 = token_prf(pred, corpus::normalize_tokens(ref.text)).f1;
    auto [it, fresh] = out.per_type.try_emplace(ref.answer_type, f1);
    if (!fresh) it->second = std::max(it->second, f1);
    out.overall = std::max(out.overall, f1);
  }
  return out;
}

double evidence_f1(const std::set<std::string>& predicted, const std::set<std::string>& gold) {
  return set_prf(predicted, gold).f1;
}

std::size_t top_percent_cutoff(double k_percent, std::size_t n_passages) {
  if (!(k_percent > 0 && k_percent <= 100)) throw ValidationError("K% must lie in (0, 100]");
  // K*N first keeps integral products exact, e.g. 5% of 40 is exactly 2.
  const double m = std::ceil(k_percent * static_cast<double>(n_passages) / 100.0 - 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::max(0.0, m)));
}

std::optional<double> recall_at_percent(const retrieve::RankedList& ranked,
                                        const std::set<std::string>& gold, double k_percent) {
  if (gold.empty()) return std::nullopt;
  const std::size_t m = std::min(top_percent_cutoff(k_percent, ranked.entries.size()),
                                 ranked.entries.size());
  std::size_t hit = 0;
  for (std::size_t i = 0; i < m; ++i) hit += gold.count(ranked.entries[i].passage_id);
  return static_cast<double>(hit) / static_cast<double>(gold.size());
}

std::string_view to_string(Grouping g) {
  return g == Grouping::by_document_then_mean ? "by_document_then_mean" : "flat_mean";
}

double aggregate(std::span<const QuestionValue> values, Grouping grouping) {
  if (values.empty()) throw ValidationError("nothing to aggregate");
  if (grouping == Grouping::flat_mean) {
    double sum = 0;
    for (const auto& v : values) sum += v.value;
    return sum / static_cast<double>(values.size());
  }
  std::map<std::string, std::pair<double, std::size_t>> per_doc;
  for (const auto& v : values) {
    auto& [sum, n] = per_doc[v.doc_id];
    sum += v.value;
    ++n;
  }
  double total = 0;
  for (const auto& [doc, acc] : per_doc) total += acc.first / static_cast<double>(acc.second);
  return total / static_cast<double>(per_doc.size());
}

}  // namespace docqa::metrics
