#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "docqa/retrieve/ranking.hpp"

namespace docqa::service {

enum class AnswererKind { reference, backend };

struct Endpoints {
  std::string detect;
  std::string embed;
  std::string score;
  std::string generate;
};

// Flat configuration. The config file is a JSON object whose keys are a
// subset of: retriever, k1, b, k, threshold, answerer, detect_url, embed_url,
// score_url, generate_url, data_dir, seed, char_extractor, batch_size,
// timeout_s.
struct PipelineConfig {
  retrieve::Retriever retriever = retrieve::Retriever::bm25;
  retrieve::Bm25Params bm25;
  int k = 3;
  double evidence_threshold = 0.5;
  AnswererKind answerer = AnswererKind::reference;
  Endpoints endpoints;
  std::filesystem::path data_dir = "docqa-data";
  std::uint64_t seed = 0;
  std::string char_extractor = "python3 tools/pdf_chars.py";
  std::size_t batch_size = 8;
  double timeout_s = 30;

  void validate() const;
};

PipelineConfig parse_config(std::string_view json_text, PipelineConfig base = {});
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});
std::string config_to_json(const PipelineConfig& cfg);

bool is_well_formed_url(std::string_view url);

}  // namespace docqa::service
