// docqa command line: ingest, extract, index, ask, eval, pairs, weak, serve.

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>

#include <unistd.h>

#include "docqa/comprehend/weak_supervision.hpp"
#include "docqa/corpus/corpus.hpp"
#include "docqa/error.hpp"
#include "docqa/extract/extract.hpp"
#include "docqa/extract/io.hpp"
#include "docqa/retrieve/training_pairs.hpp"
#include "docqa/service/config.hpp"
#include "docqa/service/http_api.hpp"
#include "docqa/service/pipeline.hpp"

using namespace docqa;
namespace fs = std::filesystem;

namespace {

struct Globals {
  std::string config;
  std::string data_dir;
  std::optional<std::uint64_t> seed;
  std::string retriever;
  std::optional<int> k;
};

service::PipelineConfig resolve_config(const Globals& g) {
  service::PipelineConfig cfg;
  if (!g.config.empty()) cfg = service::load_config(g.config);
  if (!g.data_dir.empty()) cfg.data_dir = g.data_dir;
  if (g.seed) cfg.seed = *g.seed;
  if (!g.retriever.empty()) cfg.retriever = retrieve::retriever_from_string(g.retriever);
  if (g.k) cfg.k = *g.k;
  cfg.validate();
  return cfg;
}

service::Pipeline make_pipeline(const service::PipelineConfig& cfg) {
  return service::Pipeline(cfg, std::make_shared<service::DocumentStore>(cfg.data_dir));
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError(path, "cannot open for writing");
  out << text;
}

std::set<extract::RegionCategory> parse_keep(const std::vector<std::string>& names) {
  if (names.empty()) return service::kDefaultKeep;
  std::set<extract::RegionCategory> keep;
  for (const auto& n : names) keep.insert(extract::region_category_from_string(n));
  return keep;
}

service::RegionSpec region_spec(const std::string& sidecar, bool detect) {
  if (!sidecar.empty()) return {service::RegionSource::sidecar, sidecar, std::nullopt};
  if (detect) return {service::RegionSource::detector, {}, std::nullopt};
  return {service::RegionSource::fallback, {}, std::nullopt};
}

// Loads a split from a QASPER file or an ingested directory.
corpus::Dataset load_dataset(const std::string& path, const std::string& split) {
  return service::load_split(split, path).data;
}

service::ApiServer* g_server = nullptr;

void stop_server(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Document question answering over research papers"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--data-dir", g.data_dir, "Document store directory");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--retriever", g.retriever, "bm25 | dual_encoder | cross_encoder");
  app.add_option("-k,--k", g.k, "Number of top contexts");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Ingest a QASPER split or a PDF");
  std::string qasper, split = "validation", out_dir, pdf, sidecar, chars, title;
  bool detect = false, fallback = false;
  ingest->add_option("--qasper", qasper, "QASPER JSON file")->check(CLI::ExistingFile);
  ingest->add_option("--split", split, "train | validation | test");
  ingest->add_option("--out", out_dir, "Output directory for an ingested QASPER split");
  ingest->add_option("--pdf", pdf, "PDF to ingest into the document store");
  ingest->add_option("--chars", chars, "Pre-extracted character dump (skips the extractor)")
      ->check(CLI::ExistingFile);
  auto* regions_opt = ingest->add_option("--regions", sidecar, "Region sidecar JSON")
                          ->check(CLI::ExistingFile);
  auto* detect_flag = ingest->add_flag("--detect", detect, "Use the detect backend for regions");
  auto* fallback_flag = ingest->add_flag("--fallback", fallback, "Whitespace-block regions");
  regions_opt->excludes(detect_flag)->excludes(fallback_flag);
  detect_flag->excludes(fallback_flag);
  ingest->add_option("--title", title, "Document title");

  // extract
  auto* extract_cmd = app.add_subcommand("extract", "Clip text to regions without storing");
  std::string x_chars, x_pdf, x_regions, x_out;
  std::vector<std::string> keep_names;
  extract_cmd->add_option("--chars", x_chars, "Character dump")->check(CLI::ExistingFile);
  extract_cmd->add_option("--pdf", x_pdf, "PDF (runs the character extractor)")
      ->check(CLI::ExistingFile);
  extract_cmd->add_option("--regions", x_regions, "Region sidecar (default: fallback blocks)")
      ->check(CLI::ExistingFile);
  extract_cmd->add_option("--keep", keep_names, "Region categories to keep");
  extract_cmd->add_option("--out", x_out, "Output file (default stdout)");

  // index
  auto* index_cmd = app.add_subcommand("index", "Rebuild BM25 index snapshots");
  std::string i_doc;
  index_cmd->add_option("--doc", i_doc, "Document id (default: all stored documents)");

  // list
  auto* list_cmd = app.add_subcommand("list", "List stored documents");

  // ask
  auto* ask = app.add_subcommand("ask", "Ask a question about a stored document");
  std::string a_doc, a_question;
  bool no_timings = false;
  ask->add_option("--doc", a_doc, "Document id")->required();
  ask->add_option("--question,-q", a_question, "Question text")->required();
  ask->add_flag("--no-timings", no_timings, "Omit stage timings (byte-stable output)");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate over QASPER splits");
  std::vector<std::string> e_splits;
  std::string e_out = "eval-out", grouping = "by_document";
  bool recall_only = false;
  eval->add_option("--split", e_splits, "name=path (QASPER file or ingested directory)")
      ->required();
  eval->add_option("--out", e_out, "Report directory");
  eval->add_flag("--recall-only", recall_only, "Skip answering; retrieval metrics only");
  eval->add_option("--grouping", grouping, "Recall aggregation: by_document | flat")
      ->check(CLI::IsMember({"by_document", "flat"}));

  // pairs
  auto* pairs = app.add_subcommand("pairs", "Build retriever training pairs");
  std::string p_split, p_out, p_format = "tsv", p_negatives = "bm25";
  int p_ratio = 4;
  pairs->add_option("--split", p_split, "QASPER file or ingested directory")->required();
  pairs->add_option("--split-name", split, "train | validation | test");
  pairs->add_option("--out", p_out, "Output file (default stdout)");
  pairs->add_option("--format", p_format)->check(CLI::IsMember({"tsv", "jsonl"}));
  pairs->add_option("--negatives", p_negatives)->check(CLI::IsMember({"bm25", "random"}));
  pairs->add_option("--ratio", p_ratio, "Negatives per positive")->check(CLI::PositiveNumber);

  // weak
  auto* weak = app.add_subcommand("weak", "Sample weak-supervision finetuning examples");
  std::string w_split, w_out;
  std::size_t w_samples = 3;
  weak->add_option("--split", w_split, "QASPER file or ingested directory")->required();
  weak->add_option("--split-name", split, "train | validation | test");
  weak->add_option("--samples", w_samples, "Contexts sampled per question");
  weak->add_option("--out", w_out, "Output JSONL (default stdout)");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  std::string host = "127.0.0.1", static_dir;
  int port = 8080;
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->add_option("--static", static_dir, "Serve a built web client from this directory")
      ->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      if (!qasper.empty()) {
        if (out_dir.empty()) throw ValidationError("--qasper needs --out");
        auto ds = corpus::load_qasper(qasper, corpus::split_from_string(split));
        corpus::write_corpus(fs::path(out_dir) / "corpus.jsonl", ds.documents);
        corpus::write_questions(fs::path(out_dir) / "questions.json", ds.questions);
        for (const auto& w : ds.warnings) std::cerr << "warning: " << w << "\n";
        std::cout << ds.documents.size() << " documents, " << ds.questions.size()
                  << " questions, " << ds.warnings.size() << " warnings -> " << out_dir << "\n";
        return 0;
      }
      if (pdf.empty() && chars.empty()) throw ValidationError("ingest needs --qasper or --pdf");
      auto pipeline = make_pipeline(resolve_config(g));
      const auto spec = region_spec(sidecar, detect);
      service::IngestResult r;
      if (!chars.empty()) {
        r = pipeline.ingest_chars(extract::read_char_dump(chars), spec,
                                  title.empty() ? fs::path(pdf.empty() ? chars : pdf).stem().string() : title,
                                  pdf);
      } else {
        r = pipeline.ingest_pdf(pdf, spec, title);
      }
      std::cout << r.doc_id << "\t" << r.passages << " passages\t"
                << (r.created ? "created" : "already stored") << "\n";
      return 0;
    }

    if (*extract_cmd) {
      if (x_chars.empty() == x_pdf.empty()) throw ValidationError("extract needs one of --chars or --pdf");
      extract::CharDump dump;
      if (!x_chars.empty()) {
        dump = extract::read_char_dump(x_chars);
      } else {
        const auto cfg = resolve_config(g);
        const auto tmp = fs::temp_directory_path() / ("docqa-extract-" + std::to_string(::getpid()) + ".jsonl");
        dump = extract::run_char_extractor(cfg.char_extractor, x_pdf, tmp);
        fs::remove(tmp);
      }
      auto regions = x_regions.empty() ? extract::fallback_regions(dump.chars)
                                       : extract::read_region_sidecar(x_regions);
      regions = extract::validate_regions(std::move(regions), dump);
      auto passages = extract::assemble_passages(regions, dump.chars, parse_keep(keep_names), dump.pages);
      if (passages.empty()) throw ValidationError("extraction produced no passages");
      const auto doc = corpus::register_document(
          std::move(passages), fs::path(x_pdf.empty() ? x_chars : x_pdf).stem().string());
      write_output(x_out, corpus::serialize_document(doc) + "\n");
      return 0;
    }

    if (*index_cmd) {
      service::DocumentStore store(resolve_config(g).data_dir);
      std::vector<std::string> ids;
      if (!i_doc.empty()) ids.push_back(i_doc);
      else for (const auto& d : store.list()) ids.push_back(d.doc_id);
      for (const auto& id : ids) {
        store.reindex(id);
        const auto s = store.get(id);
        std::cout << id << "\t" << s->index.passage_count() << " passages\t"
                  << s->index.terms().size() << " terms\n";
      }
      return 0;
    }

    if (*list_cmd) {
      service::DocumentStore store(resolve_config(g).data_dir);
      for (const auto& d : store.list())
        std::cout << d.doc_id << "\t" << d.passages << "\t" << corpus::to_string(d.source) << "\t"
                  << d.title << "\n";
      return 0;
    }

    if (*ask) {
      auto pipeline = make_pipeline(resolve_config(g));
      const auto resp = pipeline.ask(a_doc, a_question);
      std::cout << resp.to_json(!no_timings) << "\n";
      for (const auto& w : resp.warnings) std::cerr << "warning: " << w << "\n";
      return 0;
    }

    if (*eval) {
      auto pipeline = make_pipeline(resolve_config(g));
      std::vector<std::pair<std::string, fs::path>> splits;
      for (const auto& s : e_splits) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ValidationError("--split expects name=path, got '" + s + "'");
        splits.emplace_back(s.substr(0, eq), s.substr(eq + 1));
      }
      service::EvalOptions opts;
      opts.mode = recall_only ? service::EvalMode::recall_only : service::EvalMode::full;
      opts.recall_grouping = grouping == "flat" ? metrics::Grouping::flat_mean
                                                : metrics::Grouping::by_document_then_mean;
      const auto report = service::run_eval(splits, pipeline, e_out, opts);
      std::cout << report.to_text();
      return 0;
    }

    if (*pairs) {
      const auto cfg = resolve_config(g);
      const auto ds = load_dataset(p_split, split);
      retrieve::TrainingPairConfig pc;
      pc.negatives_per_positive = p_ratio;
      pc.hard_negative_source = p_negatives == "random" ? retrieve::NegativeSource::random
                                                        : retrieve::NegativeSource::bm25_top;
      pc.seed = cfg.seed;
      pc.bm25 = cfg.bm25;
      std::map<std::string, std::pair<const corpus::Document*, retrieve::InvertedIndex>> docs;
      for (const auto& d : ds.documents)
        if (!d.passages.empty()) docs.try_emplace(d.doc_id, &d, retrieve::InvertedIndex::build(d));
      std::vector<retrieve::TrainingPair> all;
      std::vector<std::string> warnings;
      for (const auto& q : ds.questions) {
        if (q.gold_evidence.empty()) continue;
        const auto it = docs.find(q.doc_id);
        if (it == docs.end()) continue;
        auto ps = retrieve::build_training_pairs(q, *it->second.first, it->second.second, pc, &warnings);
        all.insert(all.end(), ps.begin(), ps.end());
      }
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      write_output(p_out, p_format == "tsv" ? retrieve::training_pairs_tsv(all)
                                            : retrieve::training_pairs_jsonl(all));
      return 0;
    }

    if (*weak) {
      const auto cfg = resolve_config(g);
      auto pipeline = make_pipeline(cfg);
      const auto ds = load_dataset(w_split, split);
      std::map<std::string, std::pair<const corpus::Document*, retrieve::InvertedIndex>> docs;
      for (const auto& d : ds.documents)
        if (!d.passages.empty()) docs.try_emplace(d.doc_id, &d, retrieve::InvertedIndex::build(d));
      std::vector<comprehend::WeakExample> all;
      std::uint64_t n = 0;
      for (const auto& q : ds.questions) {
        const auto it = docs.find(q.doc_id);
        if (it == docs.end() || q.gold_answers.empty()) continue;
        const auto ranked = pipeline.rank(*it->second.first, it->second.second, q.text, cfg.retriever);
        // Per-question seeds keep output stable when questions are added or removed elsewhere.
        auto ex = comprehend::weak_supervision_sampler(q, ranked, *it->second.first, w_samples,
                                                       cfg.seed + n++);
        all.insert(all.end(), ex.begin(), ex.end());
      }
      write_output(w_out, comprehend::weak_examples_jsonl(all));
      return 0;
    }

    if (*serve) {
      auto pipeline = make_pipeline(resolve_config(g));
      service::ApiServer server(pipeline);
      if (!static_dir.empty()) server.mount_static(static_dir);
      const int bound = server.bind(host, port);
      g_server = &server;
      std::signal(SIGINT, stop_server);
      std::signal(SIGTERM, stop_server);
      std::cerr << "listening on http://" << host << ":" << bound << "\n";
      server.listen();
      g_server = nullptr;
      return 0;
    }
  } catch (const NotFoundError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
