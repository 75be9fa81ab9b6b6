#include "docqa/service/pipeline.hpp"

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <fstream>
#include <sstream>

#include "docqa/comprehend/answer.hpp"
#include "docqa/error.hpp"
#include "docqa/extract/extract.hpp"
#include "json_io.hpp"

namespace docqa::service {
namespace fs = std::filesystem;
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

nlohmann::ordered_json candidate_json(const comprehend::AnswerCandidate& c) {
  nlohmann::ordered_json j;
  j["text"] = c.text;
  j["answer_type"] = std::string(comprehend::to_string(c.answer_type));
  j["confidence"] = c.confidence;
  j["passage_id"] = c.passage_id;
  j["rank_of_context"] = c.rank_of_context;
  if (c.confidence_defaulted) j["confidence_defaulted"] = true;
  return j;
}

}  // namespace

Backends Backends::from_config(const PipelineConfig& cfg) {
  Backends b;
  const auto& e = cfg.endpoints;
  if (!e.embed.empty()) b.embedder = std::make_shared<HttpEmbedder>(HttpBackend(e.embed, cfg.timeout_s));
  if (!e.score.empty()) b.scorer = std::make_shared<HttpPairScorer>(HttpBackend(e.score, cfg.timeout_s));
  if (!e.generate.empty())
    b.generator = std::make_shared<HttpGenerator>(HttpBackend(e.generate, cfg.timeout_s));
  if (!e.detect.empty())
    b.detector = std::make_shared<HttpRegionDetector>(HttpBackend(e.detect, cfg.timeout_s));
  return b;
}

std::string AskResponse::to_json(bool include_timings) const {
  nlohmann::ordered_json j;
  j["doc_id"] = doc_id;
  j["question"] = question;
  j["retriever"] = std::string(retrieve::to_string(retriever));
  j["answer"] = candidate_json(answer);
  j["candidates"] = nlohmann::ordered_json::array();
  for (const auto& c : candidates) j["candidates"].push_back(candidate_json(c));
  j["evidence"] = nlohmann::ordered_json::array();
  for (const auto& e : evidence) {
    nlohmann::ordered_json item;
    item["passage_id"] = e.passage_id;
    item["rank"] = e.rank;
    item["score"] = e.score;
    item["category"] = std::string(corpus::to_string(e.category));
    if (e.page_index) item["page_index"] = *e.page_index;
    item["text"] = e.text;
    j["evidence"].push_back(std::move(item));
  }
  if (include_timings) {
    j["timings_ms"] = nlohmann::ordered_json::object();
    for (const auto& [stage, ms] : timings_ms) j["timings_ms"][stage] = ms;
  }
  j["warnings"] = warnings;
  return j.dump();
}

Pipeline::Pipeline(PipelineConfig cfg, std::shared_ptr<DocumentStore> store)
    : Pipeline(cfg, std::move(store), Backends::from_config(cfg)) {}

Pipeline::Pipeline(PipelineConfig cfg, std::shared_ptr<DocumentStore> store, Backends backends)
    : cfg_(std::move(cfg)), store_(std::move(store)), backends_(std::move(backends)) {
  cfg_.validate();
  if (!store_) throw ValidationError("pipeline needs a document store");
}

retrieve::RankedList Pipeline::rank(const corpus::Document& doc,
                                    const retrieve::InvertedIndex& index,
                                    std::string_view question,
                                    retrieve::Retriever retriever) const {
  try {
    switch (retriever) {
      case retrieve::Retriever::bm25:
        return retrieve::bm25_rank(question, index, cfg_.bm25);
      case retrieve::Retriever::dual_encoder:
        if (!backends_.embedder) throw StageError("retrieve", "dual_encoder needs embed_url");
        return retrieve::dual_encoder_rank(question, doc, *backends_.embedder);
      case retrieve::Retriever::cross_encoder:
        if (!backends_.scorer) throw StageError("retrieve", "cross_encoder needs score_url");
        return retrieve::cross_encoder_rank(question, doc.passages, *backends_.scorer,
                                            {cfg_.batch_size, 1});
    }
  } catch (const TransportError& e) {
    throw StageError("retrieve", e.what());
  } catch (const ProtocolError& e) {
    throw StageError("retrieve", e.what());
  }
  throw StageError("retrieve", "unsupported retriever");
}

std::vector<comprehend::AnswerCandidate> Pipeline::answer(const corpus::Document& doc,
                                                          const retrieve::RankedList& ranked,
                                                          std::string_view question, int k,
                                                          std::vector<std::string>* warnings) const {
  if (cfg_.answerer == AnswererKind::reference) {
    comprehend::ReferenceAnswerer ref;
    return comprehend::answer_with_contexts(question, ranked, doc, k, ref, warnings);
  }
  if (!backends_.generator) throw StageError("comprehend", "answerer=backend needs generate_url");
  comprehend::GeneratorAnswerer gen(*backends_.generator);
  return comprehend::answer_with_contexts(question, ranked, doc, k, gen, warnings);
}

AskResponse Pipeline::ask(const std::string& doc_id, const std::string& question,
                          const AskOptions& options) const {
  const auto stored = store_->get(doc_id);
  const int k = options.k.value_or(cfg_.k);
  if (k < 1) throw ValidationError("k must be >= 1");

  AskResponse resp;
  resp.doc_id = doc_id;
  resp.question = question;
  resp.retriever = options.retriever.value_or(cfg_.retriever);

  auto start = Clock::now();
  const auto ranked = rank(stored->doc, stored->index, question, resp.retriever);
  resp.timings_ms.emplace_back("retrieve", ms_since(start));

  start = Clock::now();
  resp.candidates = answer(stored->doc, ranked, question, k, &resp.warnings);
  resp.answer = comprehend::select_answer(resp.candidates);
  resp.timings_ms.emplace_back("comprehend", ms_since(start));

  const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(k), ranked.entries.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = ranked.entries[i];
    const auto& p = stored->doc.passage(e.passage_id);
    resp.evidence.push_back({e.passage_id, p.text, e.score, static_cast<int>(i + 1), p.category,
                             p.page_index});
  }
  return resp;
}

std::vector<extract::RegionBox> Pipeline::resolve_regions(const extract::CharDump& dump,
                                                          const RegionSpec& spec,
                                                          const fs::path& pdf) const {
  switch (spec.source) {
    case RegionSource::sidecar:
      if (spec.regions) return *spec.regions;
      return extract::read_region_sidecar(spec.sidecar);
    case RegionSource::detector:
      if (!backends_.detector) throw StageError("detect", "detector regions need detect_url");
      if (pdf.empty()) throw StageError("detect", "detector needs the source PDF");
      try {
        return backends_.detector->detect(pdf, dump);
      } catch (const TransportError& e) {
        throw StageError("detect", e.what());
      } catch (const ProtocolError& e) {
        throw StageError("detect", e.what());
      }
    case RegionSource::fallback:
      return extract::fallback_regions(dump.chars);
  }
  return {};
}

IngestResult Pipeline::ingest_chars(const extract::CharDump& dump, const RegionSpec& spec,
                                    std::string title, const fs::path& pdf) {
  auto regions = extract::validate_regions(resolve_regions(dump, spec, pdf), dump);
  auto passages = extract::assemble_passages(regions, dump.chars, kDefaultKeep, dump.pages);
  if (passages.empty())
    throw ValidationError(
        "extraction produced no passages; supply a region sidecar or use fallback region mode");
  auto doc = corpus::register_document(std::move(passages), std::move(title),
                                       corpus::DocumentSource::pdf_extracted);
  const bool created = store_->put(doc, regions);
  return {doc.doc_id, doc.passages.size(), created};
}

IngestResult Pipeline::ingest_pdf(const fs::path& pdf, const RegionSpec& spec, std::string title) {
  if (!fs::exists(pdf)) throw IngestError(pdf.string(), "no such file");
  static std::atomic<unsigned> counter{0};
  const auto tmp_dir = store_->data_dir() / "tmp";
  fs::create_directories(tmp_dir);
  const auto dump_path = tmp_dir / ("chars-" + std::to_string(::getpid()) + "-" +
                                    std::to_string(counter++) + ".jsonl");
  extract::CharDump dump;
  try {
    dump = extract::run_char_extractor(cfg_.char_extractor, pdf, dump_path);
  } catch (...) {
    fs::remove(dump_path);
    throw;
  }
  fs::remove(dump_path);
  if (title.empty()) title = pdf.stem().string();
  return ingest_chars(dump, spec, std::move(title), pdf);
}

metrics::EvalReport Pipeline::evaluate(const std::vector<EvalSplit>& splits,
                                       const EvalOptions& options) const {
  using corpus::AnswerType;
  metrics::EvalReport report;
  report.retriever = std::string(retrieve::to_string(cfg_.retriever));
  report.answerer = cfg_.answerer == AnswererKind::reference ? "reference" : "backend";
  report.k = cfg_.k;
  report.recall_grouping = std::string(metrics::to_string(options.recall_grouping));
  report.answers_evaluated = options.mode == EvalMode::full;
  const bool probabilistic = cfg_.retriever == retrieve::Retriever::cross_encoder;
  std::ostringstream rule;
  if (probabilistic)
    rule << "score >= " << cfg_.evidence_threshold;
  else
    rule << "top-" << cfg_.k << " passages";
  report.evidence_rule = rule.str();

  for (const auto& split : splits) {
    report.splits.push_back(split.name);
    std::map<std::string, std::pair<const corpus::Document*, retrieve::InvertedIndex>> docs;
    for (const auto& d : split.data.documents)
      if (!d.passages.empty()) docs.try_emplace(d.doc_id, &d, retrieve::InvertedIndex::build(d));

    std::map<double, std::vector<metrics::QuestionValue>> recall;
    std::vector<metrics::QuestionValue> evidence, overall, best;
    std::map<AnswerType, std::vector<metrics::QuestionValue>> per_type;
    metrics::Coverage cov;

    for (const auto& q : split.data.questions) {
      auto it = docs.find(q.doc_id);
      if (it == docs.end()) continue;
      ++cov.questions;
      const auto& [doc, index] = it->second;
      const auto ranked = rank(*doc, index, q.text, cfg_.retriever);

      const bool measurable = !q.gold_evidence.empty() && q.unresolved_evidence == 0;
      if (q.unresolved_evidence > 0) ++cov.with_unresolved;
      if (!q.gold_evidence.empty()) ++cov.with_evidence;
      if (measurable) {
        for (const double kp : metrics::kRecallPercents)
          recall[kp].push_back({q.doc_id, *metrics::recall_at_percent(ranked, q.gold_evidence, kp)});
        std::set<std::string> predicted;
        if (probabilistic) {
          predicted = retrieve::classify_evidence(ranked, cfg_.evidence_threshold);
        } else {
          for (std::size_t i = 0; i < std::min<std::size_t>(cfg_.k, ranked.entries.size()); ++i)
            predicted.insert(ranked.entries[i].passage_id);
        }
        evidence.push_back({q.doc_id, metrics::evidence_f1(predicted, q.gold_evidence)});
      }

      if (options.mode == EvalMode::full) {
        const auto cands = answer(*doc, ranked, q.text, cfg_.k, nullptr);
        const auto chosen = comprehend::select_answer(cands);
        const auto f1 = metrics::answer_f1(chosen.text, q.gold_answers);
        overall.push_back({q.doc_id, f1.overall});
        for (const auto& [type, v] : f1.per_type) per_type[type].push_back({q.doc_id, v});
        double top = 0;
        for (const auto& c : cands) top = std::max(top, metrics::answer_f1(c.text, q.gold_answers).overall);
        best.push_back({q.doc_id, top});
      }
    }

    for (const auto& [kp, vals] : recall)
      report.recall_at[split.name][kp] = metrics::aggregate(vals, options.recall_grouping);
    if (!evidence.empty())
      report.evidence_f1[split.name] = metrics::aggregate(evidence, metrics::Grouping::flat_mean);
    if (!overall.empty()) {
      report.overall[split.name] = metrics::aggregate(overall, metrics::Grouping::flat_mean);
      report.best_of_k[split.name] = metrics::aggregate(best, metrics::Grouping::flat_mean);
    }
    for (const auto& [type, vals] : per_type) {
      report.per_type[type][split.name] = metrics::aggregate(vals, metrics::Grouping::flat_mean);
      report.per_type_count[type][split.name] = vals.size();
    }
    report.coverage[split.name] = cov;
  }
  return report;
}

EvalSplit load_split(const std::string& name, const fs::path& path) {
  if (!fs::exists(path)) throw NotFoundError("split '" + name + "' not found at " + path.string());
  EvalSplit split{name, {}};
  if (fs::is_directory(path)) {
    split.data.documents = corpus::read_corpus(path / "corpus.jsonl");
    split.data.questions = corpus::read_questions(path / "questions.json");
  } else {
    split.data = corpus::load_qasper(path, corpus::split_from_string(name));
  }
  return split;
}

metrics::EvalReport run_eval(const std::vector<std::pair<std::string, fs::path>>& splits,
                             const Pipeline& pipeline, const fs::path& out_dir,
                             const EvalOptions& options) {
  if (splits.empty()) throw ValidationError("no splits to evaluate");
  std::vector<EvalSplit> loaded;
  for (const auto& [name, path] : splits) loaded.push_back(load_split(name, path));
  auto report = pipeline.evaluate(loaded, options);
  fs::create_directories(out_dir);
  std::ofstream(out_dir / "report.json", std::ios::binary) << report.to_json();
  std::ofstream(out_dir / "report.txt", std::ios::binary) << report.to_text();
  return report;
}

}  // namespace docqa::service
