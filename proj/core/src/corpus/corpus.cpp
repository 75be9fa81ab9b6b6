#include "docqa/corpus/corpus.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "docqa/corpus/normalize.hpp"
#include "docqa/error.hpp"
#include "docqa/metrics/f1_kernel.hpp"
#include "json_io.hpp"

namespace docqa::corpus {
namespace {

constexpr std::string_view kFloatPrefix = "FLOAT SELECTED:";

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n\f\v");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n\f\v");
  return std::string(s.substr(b, e - b + 1));
}

std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (const char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string passage_id_for(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "p%04zu", i);
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError(path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IngestError(path.string(), "read failed");
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& data) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IngestError(path.string(), "cannot open for writing");
  out << data;
  if (!out) throw IngestError(path.string(), "write failed");
}

// One typed gold answer from a QASPER annotation, or nothing when the
// annotation is unanswerable or empty.
std::optional<GoldAnswer> gold_from_annotation(const json& a) {
  if (a.value("unanswerable", false)) return std::nullopt;
  if (a.contains("yes_no") && a["yes_no"].is_boolean())
    return GoldAnswer{AnswerType::boolean, a["yes_no"].get<bool>() ? "yes" : "no"};
  if (a.contains("extractive_spans") && a["extractive_spans"].is_array() &&
      !a["extractive_spans"].empty()) {
    std::string joined;
    for (const auto& span : a["extractive_spans"]) {
      if (!joined.empty()) joined += ", ";
      joined += span.get<std::string>();
    }
    return GoldAnswer{AnswerType::extractive, joined};
  }
  if (a.contains("free_form_answer") && a["free_form_answer"].is_string()) {
    auto text = trim(a["free_form_answer"].get<std::string>());
    if (!text.empty()) return GoldAnswer{AnswerType::abstractive, std::move(text)};
  }
  return std::nullopt;
}

Document document_from_paper(const std::string& paper_id, const json& paper) {
  Document doc;
  doc.doc_id = paper_id;
  doc.title = paper.value("title", std::string());
  doc.source = DocumentSource::dataset_text;
  auto add = [&](std::string_view text, PassageCategory cat) {
    auto t = trim(text);
    if (t.empty()) return;
    doc.passages.push_back(Passage{passage_id_for(doc.passages.size()), std::move(t), cat, {}, {}});
  };
  if (paper.contains("full_text") && paper["full_text"].is_array()) {
    for (const auto& section : paper["full_text"]) {
      if (!section.contains("paragraphs")) continue;
      for (const auto& para : section["paragraphs"])
        if (para.is_string()) add(para.get<std::string>(), PassageCategory::paragraph);
    }
  }
  if (paper.contains("figures_and_tables") && paper["figures_and_tables"].is_array()) {
    for (const auto& fig : paper["figures_and_tables"])
      if (fig.contains("caption") && fig["caption"].is_string())
        add(fig["caption"].get<std::string>(), PassageCategory::caption);
  }
  return doc;
}

}  // namespace

std::string_view to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::validation: return "validation";
    case Split::test: return "test";
  }
  return "train";
}

Split split_from_string(std::string_view s) {
  if (s == "train") return Split::train;
  if (s == "validation" || s == "dev" || s == "val") return Split::validation;
  if (s == "test") return Split::test;
  throw ValidationError("unknown split '" + std::string(s) + "'");
}

std::optional<std::string> match_evidence(const Document& doc, std::string_view evidence,
                                          double min_f1) {
  std::string_view ev = evidence;
  if (ev.starts_with(kFloatPrefix)) ev.remove_prefix(kFloatPrefix.size());
  const auto target = normalize_tokens(ev);
  if (target.empty()) return std::nullopt;
  std::vector<std::vector<std::string>> normalized;
  normalized.reserve(doc.passages.size());
  for (const auto& p : doc.passages) {
    normalized.push_back(normalize_tokens(p.text));
    if (normalized.back() == target) return p.passage_id;
  }
  double best = min_f1;
  std::optional<std::string> best_id;
  for (std::size_t i = 0; i < doc.passages.size(); ++i) {
    const double f1 = metrics::token_prf(normalized[i], target).f1;
    if (f1 > best) {
      best = f1;
      best_id = doc.passages[i].passage_id;
    }
  }
  return best_id;
}

Dataset parse_qasper(std::string_view json_text, const std::string& origin) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw IngestError(origin, std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw IngestError(origin, "expected an object keyed by paper id");

  Dataset out;
  try {
    for (const auto& [paper_id, paper] : root.items()) {
      Document doc = document_from_paper(paper_id, paper);
      if (paper.contains("qas")) {
        for (const auto& qa : paper["qas"]) {
          QuestionRecord q;
          q.question_id = qa.at("question_id").get<std::string>();
          q.doc_id = doc.doc_id;
          q.text = qa.at("question").get<std::string>();
          for (const auto& ann : qa.value("answers", json::array())) {
            const auto& a = ann.contains("answer") ? ann["answer"] : ann;
            auto gold = gold_from_annotation(a);
            if (!gold) continue;
            q.gold_answers.push_back(std::move(*gold));
            for (const auto& ev : a.value("evidence", json::array())) {
              const auto text = ev.get<std::string>();
              if (trim(text).empty()) continue;
              if (auto id = match_evidence(doc, text)) {
                q.gold_evidence.insert(*id);
              } else {
                ++q.unresolved_evidence;
                out.warnings.push_back(q.question_id + ": unmatched evidence \"" +
                                       text.substr(0, 80) + "\"");
              }
            }
          }
          if (!q.gold_answers.empty()) out.questions.push_back(std::move(q));
        }
      }
      out.documents.push_back(std::move(doc));
    }
  } catch (const json::exception& e) {
    throw IngestError(origin, std::string("malformed QASPER record: ") + e.what());
  }
  return out;
}

Dataset load_qasper(const std::filesystem::path& path, Split /*split*/) {
  const std::string text = read_file(path);
  return parse_qasper(text, path.string());
}

Document register_document(std::vector<Passage> passages, std::string title, DocumentSource source) {
  if (passages.empty()) throw ValidationError("cannot register a document with no passages");
  Document doc;
  doc.title = std::move(title);
  doc.source = source;
  std::uint64_t h = fnv1a(doc.title);
  h = fnv1a(to_string(source), h);
  for (std::size_t i = 0; i < passages.size(); ++i) {
    auto& p = passages[i];
    if (trim(p.text).empty())
      throw ValidationError("passage " + std::to_string(i) + " has empty text");
    p.passage_id = passage_id_for(i);
    h = fnv1a("\x1f", h);
    h = fnv1a(to_string(p.category), h);
    h = fnv1a("\x1e", h);
    h = fnv1a(p.text, h);
  }
  doc.doc_id = "d" + hex64(h);
  doc.passages = std::move(passages);
  return doc;
}

std::string serialize_document(const Document& doc) { return json(doc).dump(); }

Document deserialize_document(std::string_view line) {
  try {
    return json::parse(line).get<Document>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad document record: ") + e.what());
  }
}

std::string serialize_question(const QuestionRecord& q) { return json(q).dump(); }

QuestionRecord deserialize_question(std::string_view text) {
  try {
    return json::parse(text).get<QuestionRecord>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad question record: ") + e.what());
  }
}

void write_corpus(const std::filesystem::path& path, const std::vector<Document>& docs) {
  std::string data;
  for (const auto& d : docs) {
    data += serialize_document(d);
    data += '\n';
  }
  write_file(path, data);
}

std::vector<Document> read_corpus(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<Document> docs;
  std::string line;
  while (std::getline(in, line))
    if (!trim(line).empty()) docs.push_back(deserialize_document(line));
  return docs;
}

void write_questions(const std::filesystem::path& path, const std::vector<QuestionRecord>& qs) {
  // ordered_json keeps the ingestion order of questions in the file
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (const auto& q : qs) obj[q.question_id] = nlohmann::ordered_json::parse(json(q).dump());
  write_file(path, obj.dump(1) + "\n");
}

std::vector<QuestionRecord> read_questions(const std::filesystem::path& path) {
  const auto text = read_file(path);
  std::vector<QuestionRecord> out;
  try {
    const auto obj = nlohmann::ordered_json::parse(text);
    for (const auto& [id, q] : obj.items()) out.push_back(deserialize_question(q.dump()));
  } catch (const json::exception& e) {
    throw IngestError(path.string(), e.what());
  }
  return out;
}

}  // namespace docqa::corpus
