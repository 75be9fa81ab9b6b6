#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "docqa/extract/geometry.hpp"

namespace docqa::corpus {

enum class PassageCategory { paragraph, table, caption, other };
enum class DocumentSource { dataset_text, pdf_extracted };
enum class AnswerType { extractive, abstractive, boolean };

std::string_view to_string(PassageCategory c);
std::string_view to_string(DocumentSource s);
std::string_view to_string(AnswerType t);
PassageCategory passage_category_from_string(std::string_view s);
DocumentSource document_source_from_string(std::string_view s);
AnswerType answer_type_from_string(std::string_view s);

struct Passage {
  std::string passage_id;
  std::string text;
  PassageCategory category = PassageCategory::paragraph;
  std::optional<int> page_index;
  std::optional<extract::RegionBox> region_box;

  bool operator==(const Passage&) const = default;
};

struct Document {
  std::string doc_id;
  std::string title;
  std::vector<Passage> passages;
  DocumentSource source = DocumentSource::dataset_text;

  // Position of `passage_id` in `passages`, if present.
  std::optional<std::size_t> find(std::string_view passage_id) const;
  const Passage& passage(std::string_view passage_id) const;

  bool operator==(const Document&) const = default;
};

struct GoldAnswer {
  AnswerType answer_type = AnswerType::extractive;
  // For boolean answers this is "yes" or "no".
  std::string text;

  bool operator==(const GoldAnswer&) const = default;
};

struct QuestionRecord {
  std::string question_id;
  std::string doc_id;
  std::string text;
  std::vector<GoldAnswer> gold_answers;
  std::set<std::string> gold_evidence;
  // Gold evidence strings that could not be aligned to a passage.
  std::size_t unresolved_evidence = 0;

  bool operator==(const QuestionRecord&) const = default;
};

}  // namespace docqa::corpus
