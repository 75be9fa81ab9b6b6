#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "docqa/comprehend/answer.hpp"
#include "docqa/corpus/corpus.hpp"
#include "docqa/extract/io.hpp"
#include "docqa/metrics/metrics.hpp"
#include "docqa/metrics/report.hpp"
#include "docqa/retrieve/ranking.hpp"
#include "docqa/service/backends.hpp"
#include "docqa/service/config.hpp"
#include "docqa/service/store.hpp"

namespace docqa::service {

// Optional model backends. Unset members mean the stage has no backend and
// falls back to the native implementation where one exists.
struct Backends {
  std::shared_ptr<retrieve::Embedder> embedder;
  std::shared_ptr<retrieve::PairScorer> scorer;
  std::shared_ptr<comprehend::Generator> generator;
  std::shared_ptr<RegionDetector> detector;

  // HTTP clients for every endpoint present in the config.
  static Backends from_config(const PipelineConfig& cfg);
};

struct AskOptions {
  std::optional<int> k;
  std::optional<retrieve::Retriever> retriever;
};

struct EvidenceItem {
  std::string passage_id;
  std::string text;
  double score = 0;
  int rank = 1;
  corpus::PassageCategory category = corpus::PassageCategory::paragraph;
  std::optional<int> page_index;
};

struct AskResponse {
  std::string doc_id;
  std::string question;
  retrieve::Retriever retriever = retrieve::Retriever::bm25;
  comprehend::AnswerCandidate answer;
  std::vector<comprehend::AnswerCandidate> candidates;
  std::vector<EvidenceItem> evidence;  // top-K in ranked order
  std::vector<std::pair<std::string, double>> timings_ms;
  std::vector<std::string> warnings;

  // Timings are the only run-dependent field; leave them out to compare runs.
  std::string to_json(bool include_timings = true) const;
};

enum class RegionSource { sidecar, detector, fallback };

struct RegionSpec {
  RegionSource source = RegionSource::fallback;
  std::filesystem::path sidecar;
  // Pre-parsed regions; take precedence over `sidecar` when set.
  std::optional<std::vector<extract::RegionBox>> regions;
};

struct IngestResult {
  std::string doc_id;
  std::size_t passages = 0;
  bool created = false;
};

enum class EvalMode { full, recall_only };

struct EvalOptions {
  EvalMode mode = EvalMode::full;
  metrics::Grouping recall_grouping = metrics::Grouping::by_document_then_mean;
};

struct EvalSplit {
  std::string name;
  corpus::Dataset data;
};

inline const std::set<extract::RegionCategory> kDefaultKeep = {
    extract::RegionCategory::paragraph, extract::RegionCategory::table,
    extract::RegionCategory::caption};

// Detect -> retrieve -> comprehend over stored documents.
class Pipeline {
 public:
  Pipeline(PipelineConfig cfg, std::shared_ptr<DocumentStore> store);
  Pipeline(PipelineConfig cfg, std::shared_ptr<DocumentStore> store, Backends backends);

  const PipelineConfig& config() const { return cfg_; }
  DocumentStore& store() const { return *store_; }

  AskResponse ask(const std::string& doc_id, const std::string& question,
                  const AskOptions& options = {}) const;

  retrieve::RankedList rank(const corpus::Document& doc, const retrieve::InvertedIndex& index,
                            std::string_view question, retrieve::Retriever retriever) const;

  std::vector<comprehend::AnswerCandidate> answer(const corpus::Document& doc,
                                                  const retrieve::RankedList& ranked,
                                                  std::string_view question, int k,
                                                  std::vector<std::string>* warnings) const;

  // PDF -> characters via the configured extractor -> regions -> passages.
  IngestResult ingest_pdf(const std::filesystem::path& pdf, const RegionSpec& regions,
                          std::string title = {});
  // Same, starting from an already extracted character dump.
  IngestResult ingest_chars(const extract::CharDump& dump, const RegionSpec& regions,
                            std::string title, const std::filesystem::path& pdf = {});

  metrics::EvalReport evaluate(const std::vector<EvalSplit>& splits,
                               const EvalOptions& options = {}) const;

 private:
  std::vector<extract::RegionBox> resolve_regions(const extract::CharDump& dump,
                                                  const RegionSpec& spec,
                                                  const std::filesystem::path& pdf) const;

  PipelineConfig cfg_;
  std::shared_ptr<DocumentStore> store_;
  Backends backends_;
};

// Loads a split from a QASPER JSON file, or from a directory written by
// `docqa ingest --qasper` (corpus.jsonl + questions.json).
EvalSplit load_split(const std::string& name, const std::filesystem::path& path);

// Evaluates the named splits and writes report.json and report.txt into
// `out_dir`. Throws if a split path does not exist.
metrics::EvalReport run_eval(const std::vector<std::pair<std::string, std::filesystem::path>>& splits,
                             const Pipeline& pipeline, const std::filesystem::path& out_dir,
                             const EvalOptions& options = {});

}  // namespace docqa::service
