#include "docqa/service/store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "docqa/corpus/corpus.hpp"
#include "docqa/error.hpp"
#include "docqa/extract/io.hpp"

namespace docqa::service {
namespace fs = std::filesystem;
namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IngestError(p.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Write to a sibling temp file, then rename into place.
void write_atomic(const fs::path& p, const std::string& data) {
  fs::create_directories(p.parent_path());
  auto tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IngestError(tmp.string(), "cannot open for writing");
    out << data;
    if (!out) throw IngestError(tmp.string(), "write failed");
  }
  fs::rename(tmp, p);
}

}  // namespace

DocumentStore::DocumentStore(fs::path data_dir) : data_dir_(std::move(data_dir)) {
  const auto docs_dir = data_dir_ / "documents";
  if (!fs::exists(docs_dir)) return;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(docs_dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    auto doc = corpus::deserialize_document(slurp(f));
    const auto index_path = data_dir_ / "index" / (doc.doc_id + ".json");
    auto index = fs::exists(index_path) ? retrieve::InvertedIndex::deserialize(slurp(index_path))
                                        : retrieve::InvertedIndex::build(doc);
    auto id = doc.doc_id;
    docs_.emplace(std::move(id),
                  std::make_shared<const StoredDocument>(StoredDocument{std::move(doc), std::move(index)}));
  }
}

std::mutex& DocumentStore::writer_lock(const std::string& doc_id) {
  std::lock_guard lock(writers_mu_);
  auto& m = writers_[doc_id];
  if (!m) m = std::make_unique<std::mutex>();
  return *m;
}

bool DocumentStore::put(const corpus::Document& doc,
                        const std::optional<std::vector<extract::RegionBox>>& regions) {
  if (doc.doc_id.empty()) throw ValidationError("document has no doc_id; register it first");
  std::lock_guard writer(writer_lock(doc.doc_id));
  if (find(doc.doc_id)) return false;

  auto stored = std::make_shared<const StoredDocument>(
      StoredDocument{doc, retrieve::InvertedIndex::build(doc)});
  write_atomic(data_dir_ / "index" / (doc.doc_id + ".json"), stored->index.serialize());
  if (regions)
    write_atomic(data_dir_ / "regions" / (doc.doc_id + ".json"),
                 extract::serialize_region_sidecar(*regions));
  // The document file goes last: its presence marks a complete entry.
  write_atomic(data_dir_ / "documents" / (doc.doc_id + ".json"), corpus::serialize_document(doc));

  std::unique_lock lock(mu_);
  docs_.emplace(doc.doc_id, std::move(stored));
  return true;
}

std::shared_ptr<const StoredDocument> DocumentStore::find(const std::string& doc_id) const {
  std::shared_lock lock(mu_);
  auto it = docs_.find(doc_id);
  return it == docs_.end() ? nullptr : it->second;
}

std::shared_ptr<const StoredDocument> DocumentStore::get(const std::string& doc_id) const {
  auto d = find(doc_id);
  if (!d) throw NotFoundError("unknown document '" + doc_id + "'");
  return d;
}

std::vector<DocumentSummary> DocumentStore::list() const {
  std::shared_lock lock(mu_);
  std::vector<DocumentSummary> out;
  for (const auto& [id, d] : docs_)
    out.push_back({id, d->doc.title, d->doc.passages.size(), d->doc.source});
  return out;
}

void DocumentStore::reindex(const std::string& doc_id) {
  std::lock_guard writer(writer_lock(doc_id));
  auto current = get(doc_id);
  auto fresh = std::make_shared<const StoredDocument>(
      StoredDocument{current->doc, retrieve::InvertedIndex::build(current->doc)});
  write_atomic(data_dir_ / "index" / (doc_id + ".json"), fresh->index.serialize());
  std::unique_lock lock(mu_);
  docs_[doc_id] = std::move(fresh);
}

}  // namespace docqa::service
