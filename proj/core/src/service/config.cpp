#include "docqa/service/config.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include "docqa/error.hpp"
#include "json_io.hpp"

namespace docqa::service {

bool is_well_formed_url(std::string_view url) {
  static const std::regex re(R"(^https?://[A-Za-z0-9.\-]+(:[0-9]{1,5})?(/[^\s]*)?$)");
  return std::regex_match(url.begin(), url.end(), re);
}

void PipelineConfig::validate() const {
  bm25.validate();
  if (k < 1) throw ValidationError("k must be >= 1");
  if (!(evidence_threshold >= 0 && evidence_threshold <= 1))
    throw ValidationError("threshold must lie in [0,1]");
  if (batch_size < 1) throw ValidationError("batch_size must be >= 1");
  const std::pair<const char*, const std::string*> urls[] = {{"detect_url", &endpoints.detect},
                                                             {"embed_url", &endpoints.embed},
                                                             {"score_url", &endpoints.score},
                                                             {"generate_url", &endpoints.generate}};
  for (const auto& [key, url] : urls)
    if (!url->empty() && !is_well_formed_url(*url))
      throw ValidationError(std::string(key) + " is not a well-formed URL: " + *url);
  if (answerer == AnswererKind::backend && endpoints.generate.empty())
    throw ValidationError("answerer=backend needs generate_url");
}

PipelineConfig parse_config(std::string_view text, PipelineConfig cfg) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a flat JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "retriever") cfg.retriever = retrieve::retriever_from_string(v.get<std::string>());
      else if (key == "k1") cfg.bm25.k1 = v.get<double>();
      else if (key == "b") cfg.bm25.b = v.get<double>();
      else if (key == "k") cfg.k = v.get<int>();
      else if (key == "threshold") cfg.evidence_threshold = v.get<double>();
      else if (key == "answerer") {
        const auto a = v.get<std::string>();
        if (a == "reference") cfg.answerer = AnswererKind::reference;
        else if (a == "backend") cfg.answerer = AnswererKind::backend;
        else throw ValidationError("answerer must be 'reference' or 'backend'");
      }
      else if (key == "detect_url") cfg.endpoints.detect = v.get<std::string>();
      else if (key == "embed_url") cfg.endpoints.embed = v.get<std::string>();
      else if (key == "score_url") cfg.endpoints.score = v.get<std::string>();
      else if (key == "generate_url") cfg.endpoints.generate = v.get<std::string>();
      else if (key == "data_dir") cfg.data_dir = v.get<std::string>();
      else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (key == "char_extractor") cfg.char_extractor = v.get<std::string>();
      else if (key == "batch_size") cfg.batch_size = v.get<std::size_t>();
      else if (key == "timeout_s") cfg.timeout_s = v.get<double>();
      else throw ValidationError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad config value: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw IngestError(path.string(), "cannot open config");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string config_to_json(const PipelineConfig& cfg) {
  nlohmann::ordered_json j;
  j["retriever"] = std::string(retrieve::to_string(cfg.retriever));
  j["k1"] = cfg.bm25.k1;
  j["b"] = cfg.bm25.b;
  j["k"] = cfg.k;
  j["threshold"] = cfg.evidence_threshold;
  j["answerer"] = cfg.answerer == AnswererKind::reference ? "reference" : "backend";
  j["detect_url"] = cfg.endpoints.detect;
  j["embed_url"] = cfg.endpoints.embed;
  j["score_url"] = cfg.endpoints.score;
  j["generate_url"] = cfg.endpoints.generate;
  j["data_dir"] = cfg.data_dir.string();
  j["seed"] = cfg.seed;
  j["char_extractor"] = cfg.char_extractor;
  j["batch_size"] = cfg.batch_size;
  j["timeout_s"] = cfg.timeout_s;
  return j.dump(2) + "\n";
}

}  // namespace docqa::service
