#include "docqa/retrieve/training_pairs.hpp"

#include "docqa/error.hpp"
#include "docqa/random.hpp"
#include "json_io.hpp"

namespace docqa::retrieve {
namespace {

std::string tsv_field(std::string s) {
  for (auto& c : s)
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  return s;
}

}  // namespace

std::vector<TrainingPair> build_training_pairs(const corpus::QuestionRecord& q,
                                               const corpus::Document& doc,
                                               const InvertedIndex& index,
                                               const TrainingPairConfig& cfg,
                                               std::vector<std::string>* warnings) {
  if (cfg.negatives_per_positive < 1)
    throw ValidationError("negatives_per_positive must be >= 1");
  if (q.gold_evidence.empty())
    throw ValidationError("question '" + q.question_id + "' has no gold evidence");

  std::vector<std::size_t> gold;
  for (std::size_t i = 0; i < doc.passages.size(); ++i)
    if (q.gold_evidence.contains(doc.passages[i].passage_id)) gold.push_back(i);

  std::vector<std::string> negatives;
  if (cfg.hard_negative_source == NegativeSource::bm25_top) {
    for (const auto& e : bm25_rank(q.text, index, cfg.bm25).entries)
      if (!q.gold_evidence.contains(e.passage_id)) negatives.push_back(e.passage_id);
  } else {
    for (const auto& p : doc.passages)
      if (!q.gold_evidence.contains(p.passage_id)) negatives.push_back(p.passage_id);
    Rng rng(cfg.seed);
    portable_shuffle(negatives.begin(), negatives.end(), rng);
  }

  const std::size_t want = gold.size() * static_cast<std::size_t>(cfg.negatives_per_positive);
  if (negatives.size() < want && warnings) {
    warnings->push_back(q.question_id + ": only " + std::to_string(negatives.size()) +
                        " negatives available, wanted " + std::to_string(want));
  }
  negatives.resize(std::min(negatives.size(), want));

  std::vector<TrainingPair> out;
  std::size_t next = 0;
  const auto per = static_cast<std::size_t>(cfg.negatives_per_positive);
  for (const std::size_t g : gold) {
    const auto& p = doc.passages[g];
    out.push_back({q.question_id, q.text, p.passage_id, p.text, 1});
    for (std::size_t k = 0; k < per && next < negatives.size(); ++k, ++next) {
      const auto& n = doc.passage(negatives[next]);
      out.push_back({q.question_id, q.text, n.passage_id, n.text, 0});
    }
  }
  return out;
}

std::string training_pairs_tsv(const std::vector<TrainingPair>& pairs) {
  std::string out;
  for (const auto& p : pairs) {
    out += tsv_field(p.question_id) + '\t' + tsv_field(p.passage_id) + '\t' +
           std::to_string(p.label) + '\n';
  }
  return out;
}

std::string training_pairs_jsonl(const std::vector<TrainingPair>& pairs) {
  std::string out;
  for (const auto& p : pairs) {
    out += json{{"question_id", p.question_id},
                {"question", p.question},
                {"passage_id", p.passage_id},
                {"passage", p.passage},
                {"label", p.label}}
               .dump();
    out += '\n';
  }
  return out;
}

}  // namespace docqa::retrieve
