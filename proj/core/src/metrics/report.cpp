#include "docqa/metrics/report.hpp"

#include <cstdio>
#include <sstream>

#include "json_io.hpp"

namespace docqa::metrics {
namespace {

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
  return buf;
}

std::string k_label(double k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", k);
  return buf;
}

std::string pad(std::string s, std::size_t width, bool left = false) {
  if (s.size() >= width) return s;
  return left ? s + std::string(width - s.size(), ' ') : std::string(width - s.size(), ' ') + s;
}

}  // namespace

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["splits"] = splits;
  j["retriever"] = retriever;
  j["answerer"] = answerer;
  j["k"] = k;
  j["answers_evaluated"] = answers_evaluated;
  j["recall_grouping"] = recall_grouping;
  j["evidence_rule"] = evidence_rule;
  if (answers_evaluated) {
    auto& answer = j["answer_f1"];
    for (const auto& [type, cells] : per_type) {
      auto& row = answer[std::string(corpus::to_string(type))];
      for (const auto& [split, v] : cells) row[split] = v;
    }
    for (const auto& [split, v] : overall) answer["overall"][split] = v;
    for (const auto& [split, v] : best_of_k) j["best_of_k_answer_f1"][split] = v;
    for (const auto& [type, cells] : per_type_count)
      for (const auto& [split, n] : cells)
        j["answer_counts"][std::string(corpus::to_string(type))][split] = n;
  }
  for (const auto& [split, v] : evidence_f1) j["evidence_f1"][split] = v;
  for (const auto& [split, row] : recall_at)
    for (const auto& [kp, v] : row) j["recall_at_percent"][split][k_label(kp)] = v;
  for (const auto& [split, c] : coverage) {
    j["coverage"][split] = {{"questions", c.questions},
                            {"with_evidence", c.with_evidence},
                            {"with_unresolved_evidence", c.with_unresolved}};
  }
  return j.dump(2) + "\n";
}

std::string EvalReport::to_text() const {
  std::ostringstream out;
  const std::size_t label_w = 14, cell_w = 12;
  auto header = [&](const std::string& first) {
    out << pad(first, label_w, true);
    for (const auto& s : splits) out << pad(s, cell_w);
    out << '\n';
  };

  out << "retriever: " << retriever << "   answerer: " << answerer << "   k: " << k << "\n\n";
  if (answers_evaluated) {
    out << "Answer-F1\n";
    header("");
    const std::pair<corpus::AnswerType, const char*> rows[] = {
        {corpus::AnswerType::extractive, "Extractive"},
        {corpus::AnswerType::abstractive, "Abstractive"},
        {corpus::AnswerType::boolean, "Boolean"}};
    for (const auto& [type, name] : rows) {
      out << pad(name, label_w, true);
      for (const auto& s : splits) {
        auto row = per_type.find(type);
        const bool has = row != per_type.end() && row->second.contains(s);
        out << pad(has ? pct(row->second.at(s)) : "-", cell_w);
      }
      out << '\n';
    }
    out << pad("Overall", label_w, true);
    for (const auto& s : splits) out << pad(overall.contains(s) ? pct(overall.at(s)) : "-", cell_w);
    out << '\n';
    out << pad("Best-of-K", label_w, true);
    for (const auto& s : splits)
      out << pad(best_of_k.contains(s) ? pct(best_of_k.at(s)) : "-", cell_w);
    out << "\n\n";
  }

  out << "Evidence-F1 (" << evidence_rule << ")\n";
  header("");
  out << pad(retriever, label_w, true);
  for (const auto& s : splits)
    out << pad(evidence_f1.contains(s) ? pct(evidence_f1.at(s)) : "-", cell_w);
  out << "\n\n";

  out << "Recall@K% (" << recall_grouping << ")\n";
  out << pad(retriever, label_w, true);
  for (const double kp : kRecallPercents) out << pad(k_label(kp) + "%", cell_w);
  out << '\n';
  for (const auto& s : splits) {
    out << pad(s, label_w, true);
    auto row = recall_at.find(s);
    for (const double kp : kRecallPercents) {
      const bool has = row != recall_at.end() && row->second.contains(kp);
      out << pad(has ? pct(row->second.at(kp)) : "-", cell_w);
    }
    out << '\n';
  }
  out << '\n';

  out << "Coverage\n";
  for (const auto& s : splits) {
    if (!coverage.contains(s)) continue;
    const auto& c = coverage.at(s);
    out << "  " << s << ": " << c.questions << " questions, " << c.with_evidence
        << " with resolved evidence, " << c.with_unresolved << " with unresolved evidence\n";
  }
  return out.str();
}

}  // namespace docqa::metrics
