#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "docqa/comprehend/answer.hpp"
#include "docqa/extract/io.hpp"
#include "docqa/retrieve/ranking.hpp"

namespace docqa::service {

// Produces layout regions for a PDF.
class RegionDetector {
 public:
  virtual ~RegionDetector() = default;
  virtual std::vector<extract::RegionBox> detect(const std::filesystem::path& pdf,
                                                 const extract::CharDump& dump) = 0;
};

// Wire contracts (all JSON over HTTP POST):
//   /embed    {"texts":[...]}                    -> {"vectors":[[...],...]}
//   /score    {"pairs":[[q,p],...]}               -> {"scores":[...]}
//   /generate {"question":..,"context":..}        -> {"answer":..,"confidence":..?}
//   /detect   {"pdf_base64":..,"pages":[{page,width,height}]}
//                                                 -> {"regions":[{page,bbox,category,score}]}
// Connection failures and non-2xx statuses raise TransportError; payloads
// that break the contract raise ProtocolError.
class HttpBackend {
 public:
  HttpBackend(std::string base_url, double timeout_s = 30);
  std::string post_json(const std::string& path, const std::string& body) const;
  const std::string& base_url() const { return base_url_; }

 private:
  std::string base_url_;
  double timeout_s_;
};

class HttpEmbedder final : public retrieve::Embedder {
 public:
  explicit HttpEmbedder(HttpBackend http) : http_(std::move(http)) {}
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;

 private:
  HttpBackend http_;
};

class HttpPairScorer final : public retrieve::PairScorer {
 public:
  explicit HttpPairScorer(HttpBackend http) : http_(std::move(http)) {}
  std::vector<double> score(const std::vector<std::pair<std::string, std::string>>& pairs) override;

 private:
  HttpBackend http_;
};

class HttpGenerator final : public comprehend::Generator {
 public:
  explicit HttpGenerator(HttpBackend http) : http_(std::move(http)) {}
  comprehend::Generation generate(std::string_view question, std::string_view context) override;

 private:
  HttpBackend http_;
};

class HttpRegionDetector final : public RegionDetector {
 public:
  explicit HttpRegionDetector(HttpBackend http) : http_(std::move(http)) {}
  std::vector<extract::RegionBox> detect(const std::filesystem::path& pdf,
                                         const extract::CharDump& dump) override;

 private:
  HttpBackend http_;
};

std::string base64_encode(std::string_view bytes);

}  // namespace docqa::service
