#pragma once

// nlohmann adapters for the domain types. Private to the core library so the
// public headers stay free of the JSON dependency.

#include <json.hpp>

#include "docqa/corpus/types.hpp"
#include "docqa/extract/geometry.hpp"

namespace docqa {

using json = nlohmann::json;

namespace extract {

inline void to_json(json& j, const RegionBox& r) {
  j = json{{"page", r.page_index},
           {"bbox", {r.x0, r.y0, r.x1, r.y1}},
           {"category", std::string(to_string(r.category))},
           {"score", r.detector_score}};
}

inline void from_json(const json& j, RegionBox& r) {
  r.page_index = j.at("page").get<int>();
  const auto& b = j.at("bbox");
  if (!b.is_array() || b.size() != 4) throw json::other_error::create(501, "bbox must have 4 numbers", &j);
  r.x0 = b[0].get<double>();
  r.y0 = b[1].get<double>();
  r.x1 = b[2].get<double>();
  r.y1 = b[3].get<double>();
  r.category = region_category_from_string(j.value("category", std::string("paragraph")));
  r.detector_score = j.value("score", 1.0);
}

}  // namespace extract

namespace corpus {

inline void to_json(json& j, const Passage& p) {
  j = json{{"passage_id", p.passage_id},
           {"text", p.text},
           {"category", std::string(to_string(p.category))}};
  if (p.page_index) j["page_index"] = *p.page_index;
  if (p.region_box) j["region_box"] = *p.region_box;
}

inline void from_json(const json& j, Passage& p) {
  p.passage_id = j.at("passage_id").get<std::string>();
  p.text = j.at("text").get<std::string>();
  p.category = passage_category_from_string(j.at("category").get<std::string>());
  p.page_index.reset();
  p.region_box.reset();
  if (j.contains("page_index")) p.page_index = j["page_index"].get<int>();
  if (j.contains("region_box")) p.region_box = j["region_box"].get<extract::RegionBox>();
}

inline void to_json(json& j, const Document& d) {
  j = json{{"doc_id", d.doc_id},
           {"title", d.title},
           {"source", std::string(to_string(d.source))},
           {"passages", d.passages}};
}

inline void from_json(const json& j, Document& d) {
  d.doc_id = j.at("doc_id").get<std::string>();
  d.title = j.value("title", std::string());
  d.source = document_source_from_string(j.at("source").get<std::string>());
  d.passages = j.at("passages").get<std::vector<Passage>>();
}

inline void to_json(json& j, const GoldAnswer& a) {
  j = json{{"type", std::string(to_string(a.answer_type))}, {"text", a.text}};
}

inline void from_json(const json& j, GoldAnswer& a) {
  a.answer_type = answer_type_from_string(j.at("type").get<std::string>());
  a.text = j.at("text").get<std::string>();
}

inline void to_json(json& j, const QuestionRecord& q) {
  j = json{{"question_id", q.question_id},
           {"doc_id", q.doc_id},
           {"text", q.text},
           {"gold_answers", q.gold_answers},
           {"gold_evidence", q.gold_evidence},
           {"unresolved_evidence", q.unresolved_evidence}};
}

inline void from_json(const json& j, QuestionRecord& q) {
  q.question_id = j.at("question_id").get<std::string>();
  q.doc_id = j.at("doc_id").get<std::string>();
  q.text = j.at("text").get<std::string>();
  q.gold_answers = j.at("gold_answers").get<std::vector<GoldAnswer>>();
  q.gold_evidence = j.at("gold_evidence").get<std::set<std::string>>();
  q.unresolved_evidence = j.value("unresolved_evidence", std::size_t{0});
}

}  // namespace corpus
}  // namespace docqa
