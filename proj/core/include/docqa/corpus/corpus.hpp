#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "docqa/corpus/types.hpp"

namespace docqa::corpus {

enum class Split { train, validation, test };
std::string_view to_string(Split s);
Split split_from_string(std::string_view s);

struct Dataset {
  std::vector<Document> documents;
  std::vector<QuestionRecord> questions;
  // Gold evidence strings that matched no passage, one entry per occurrence.
  std::vector<std::string> warnings;
};

// Reads one QASPER split file. Documents come out in paper_id order, questions
// in (paper order, question order). Questions left with no answerable
// annotation are dropped.
Dataset load_qasper(const std::filesystem::path& path, Split split);

// Same, from an in-memory JSON string; `origin` names the source in errors.
Dataset parse_qasper(std::string_view json_text, const std::string& origin = "<memory>");

// Assigns a content-derived doc_id and positional passage ids ("p0000", ...).
// Identical input yields identical ids.
Document register_document(std::vector<Passage> passages, std::string title,
                           DocumentSource source = DocumentSource::pdf_extracted);

// Resolve a gold evidence string to a passage: exact match on normalized
// tokens first, then the best token-F1 match strictly above `min_f1`.
std::optional<std::string> match_evidence(const Document& doc, std::string_view evidence,
                                          double min_f1 = 0.9);

// Internal corpus files: one JSON document per line, and a JSON object of
// questions keyed by question_id.
std::string serialize_document(const Document& doc);
Document deserialize_document(std::string_view json_line);
std::string serialize_question(const QuestionRecord& q);
QuestionRecord deserialize_question(std::string_view json);

void write_corpus(const std::filesystem::path& path, const std::vector<Document>& docs);
std::vector<Document> read_corpus(const std::filesystem::path& path);
void write_questions(const std::filesystem::path& path, const std::vector<QuestionRecord>& qs);
std::vector<QuestionRecord> read_questions(const std::filesystem::path& path);

}  // namespace docqa::corpus
