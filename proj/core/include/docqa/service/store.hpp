#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "docqa/corpus/types.hpp"
#include "docqa/extract/geometry.hpp"
#include "docqa/retrieve/index.hpp"

namespace docqa::service {

struct StoredDocument {
  corpus::Document doc;
  retrieve::InvertedIndex index;
};

struct DocumentSummary {
  std::string doc_id;
  std::string title;
  std::size_t passages = 0;
  corpus::DocumentSource source = corpus::DocumentSource::pdf_extracted;
};

// Content-addressed files under a data directory:
//   documents/<doc_id>.json   the registered document
//   index/<doc_id>.json       BM25 index snapshot
//   regions/<doc_id>.json     region sidecar used for extraction (PDFs only)
// Stored documents are immutable; readers get shared snapshots.
class DocumentStore {
 public:
  // Loads every document already present under `data_dir`.
  explicit DocumentStore(std::filesystem::path data_dir);

  const std::filesystem::path& data_dir() const { return data_dir_; }

  // Stores the document and its index; a no-op returning false when the
  // doc_id is already stored.
  bool put(const corpus::Document& doc,
           const std::optional<std::vector<extract::RegionBox>>& regions = std::nullopt);

  std::shared_ptr<const StoredDocument> find(const std::string& doc_id) const;
  // Throws NotFoundError.
  std::shared_ptr<const StoredDocument> get(const std::string& doc_id) const;
  std::vector<DocumentSummary> list() const;

  // Rebuilds and rewrites the index snapshot for a stored document.
  void reindex(const std::string& doc_id);

 private:
  std::mutex& writer_lock(const std::string& doc_id);

  std::filesystem::path data_dir_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<const StoredDocument>> docs_;
  std::mutex writers_mu_;
  std::map<std::string, std::unique_ptr<std::mutex>> writers_;
};

}  // namespace docqa::service
