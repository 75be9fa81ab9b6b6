#include "docqa/corpus/types.hpp"

#include "docqa/error.hpp"

namespace docqa::corpus {

std::string_view to_string(PassageCategory c) {
  switch (c) {
    case PassageCategory::paragraph: return "paragraph";
    case PassageCategory::table: return "table";
    case PassageCategory::caption: return "caption";
    case PassageCategory::other: return "other";
  }
  return "other";
}

std::string_view to_string(DocumentSource s) {
  return s == DocumentSource::dataset_text ? "dataset_text" : "pdf_extracted";
}

std::string_view to_string(AnswerType t) {
  switch (t) {
    case AnswerType::extractive: return "extractive";
    case AnswerType::abstractive: return "abstractive";
    case AnswerType::boolean: return "boolean";
  }
  return "extractive";
}

PassageCategory passage_category_from_string(std::string_view s) {
  if (s == "paragraph") return PassageCategory::paragraph;
  if (s == "table") return PassageCategory::table;
  if (s == "caption") return PassageCategory::caption;
  if (s == "other") return PassageCategory::other;
  throw ValidationError("unknown passage category '" + std::string(s) + "'");
}

DocumentSource document_source_from_string(std::string_view s) {
  if (s == "dataset_text") return DocumentSource::dataset_text;
  if (s == "pdf_extracted") return DocumentSource::pdf_extracted;
  throw ValidationError("unknown document source '" + std::string(s) + "'");
}

AnswerType answer_type_from_string(std::string_view s) {
  if (s == "extractive") return AnswerType::extractive;
  if (s == "abstractive") return AnswerType::abstractive;
  if (s == "boolean") return AnswerType::boolean;
  throw ValidationError("unknown answer type '" + std::string(s) + "'");
}

std::optional<std::size_t> Document::find(std::string_view passage_id) const {
  for (std::size_t i = 0; i < passages.size(); ++i)
    if (passages[i].passage_id == passage_id) return i;
  return std::nullopt;
}

const Passage& Document::passage(std::string_view passage_id) const {
  if (auto i = find(passage_id)) return passages[*i];
  throw NotFoundError("passage '" + std::string(passage_id) + "' not in document " + doc_id);
}

}  // namespace docqa::corpus
