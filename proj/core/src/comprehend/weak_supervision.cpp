#include "docqa/comprehend/weak_supervision.hpp"

#include <algorithm>

#include "docqa/error.hpp"
#include "docqa/random.hpp"
#include "json_io.hpp"

namespace docqa::comprehend {

std::vector<double> sampling_distribution(std::span<const double> scores, double epsilon) {
  if (scores.empty()) throw ValidationError("cannot sample from an empty ranked list");
  double total = 0;
  for (const double s : scores) {
    if (!(s >= 0)) throw ValidationError("sampling needs non-negative retrieval scores");
    total += s + epsilon;
  }
  std::vector<double> p;
  p.reserve(scores.size());
  for (const double s : scores) p.push_back((s + epsilon) / total);
  return p;
}

std::vector<std::size_t> sample_ranks(std::span<const double> scores, std::size_t n_samples,
                                      std::uint64_t seed) {
  const auto p = sampling_distribution(scores);
  std::vector<double> cdf(p.size());
  double acc = 0;
  for (std::size_t i = 0; i < p.size(); ++i) cdf[i] = acc += p[i];
  Rng rng(seed);
  std::vector<std::size_t> out;
  out.reserve(n_samples);
  for (std::size_t n = 0; n < n_samples; ++n) {
    const double u = uniform01(rng) * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    out.push_back(std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), p.size() - 1));
  }
  return out;
}

std::vector<WeakExample> weak_supervision_sampler(const corpus::QuestionRecord& q,
                                                  const retrieve::RankedList& ranked,
                                                  const corpus::Document& doc,
                                                  std::size_t n_samples, std::uint64_t seed) {
  if (q.gold_answers.empty())
    throw ValidationError("question '" + q.question_id + "' has no gold answers");
  std::vector<double> scores;
  for (const auto& e : ranked.entries) scores.push_back(e.score);
  const auto p = sampling_distribution(scores);

  auto answers = q.gold_answers;
  std::stable_sort(answers.begin(), answers.end(),
                   [](const corpus::GoldAnswer& a, const corpus::GoldAnswer& b) {
                     return a.answer_type < b.answer_type;
                   });

  std::vector<WeakExample> out;
  const auto ranks = sample_ranks(scores, n_samples, seed);
  for (std::size_t n = 0; n < ranks.size(); ++n) {
    const auto& entry = ranked.entries[ranks[n]];
    const auto& gold = answers[n % answers.size()];
    out.push_back(WeakExample{q.question_id, q.text, entry.passage_id,
                              doc.passage(entry.passage_id).text, gold.text, gold.answer_type,
                              static_cast<int>(ranks[n] + 1), p[ranks[n]]});
  }
  return out;
}

std::string weak_examples_jsonl(const std::vector<WeakExample>& examples) {
  std::string out;
  for (const auto& e : examples) {
    out += json{{"question_id", e.question_id},
                {"question", e.question},
                {"passage_id", e.passage_id},
                {"context", e.context},
                {"target", e.target},
                {"target_type", std::string(corpus::to_string(e.target_type))},
                {"sampled_rank", e.sampled_rank},
                {"sample_prob", e.sample_prob}}
               .dump();
    out += '\n';
  }
  return out;
}

}  // namespace docqa::comprehend
