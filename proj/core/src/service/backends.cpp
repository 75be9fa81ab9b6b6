#include "docqa/service/backends.hpp"

#include <httplib.h>

#include <fstream>
#include <regex>
#include <sstream>

#include "docqa/error.hpp"
#include "json_io.hpp"

namespace docqa::service {
namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host:port
  std::string prefix;  // path without trailing slash
};

ParsedUrl split_url(const std::string& url) {
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw ValidationError("malformed backend URL: " + url);
  std::string prefix = m[2].matched ? m[2].str() : std::string();
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {m[1].str(), prefix};
}

json parse_reply(const std::string& body, const std::string& what) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw ProtocolError(what + " reply is not JSON: " + e.what());
  }
}

}  // namespace

HttpBackend::HttpBackend(std::string base_url, double timeout_s)
    : base_url_(std::move(base_url)), timeout_s_(timeout_s) {
  split_url(base_url_);
}

std::string HttpBackend::post_json(const std::string& path, const std::string& body) const {
  const auto url = split_url(base_url_);
  httplib::Client client(url.origin);
  const auto secs = static_cast<time_t>(timeout_s_);
  const auto usecs = static_cast<time_t>((timeout_s_ - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  auto res = client.Post(url.prefix + path, body, "application/json");
  if (!res)
    throw TransportError("POST " + base_url_ + path + " failed: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300)
    throw TransportError("POST " + base_url_ + path + " returned HTTP " +
                         std::to_string(res->status));
  return res->body;
}

std::vector<std::vector<double>> HttpEmbedder::embed(const std::vector<std::string>& texts) {
  const auto reply = parse_reply(http_.post_json("/embed", json{{"texts", texts}}.dump()), "/embed");
  try {
    auto vectors = reply.at("vectors").get<std::vector<std::vector<double>>>();
    if (vectors.size() != texts.size())
      throw ProtocolError("/embed returned " + std::to_string(vectors.size()) + " vectors for " +
                          std::to_string(texts.size()) + " texts");
    return vectors;
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("/embed reply: ") + e.what());
  }
}

std::vector<double> HttpPairScorer::score(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  json body = {{"pairs", json::array()}};
  for (const auto& [q, p] : pairs) body["pairs"].push_back({q, p});
  const auto reply = parse_reply(http_.post_json("/score", body.dump()), "/score");
  try {
    auto scores = reply.at("scores").get<std::vector<double>>();
    if (scores.size() != pairs.size())
      throw ProtocolError("/score returned " + std::to_string(scores.size()) + " scores for " +
                          std::to_string(pairs.size()) + " pairs");
    return scores;
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("/score reply: ") + e.what());
  }
}

comprehend::Generation HttpGenerator::generate(std::string_view question,
                                               std::string_view context) {
  const auto reply = parse_reply(
      http_.post_json("/generate", json{{"question", question}, {"context", context}}.dump()),
      "/generate");
  comprehend::Generation g;
  try {
    g.answer = reply.at("answer").is_null() ? std::string() : reply.at("answer").get<std::string>();
    if (reply.contains("confidence") && !reply["confidence"].is_null()) {
      const double c = reply["confidence"].get<double>();
      if (!(c >= 0 && c <= 1)) throw ProtocolError("/generate confidence outside [0,1]");
      g.confidence = c;
    }
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("/generate reply: ") + e.what());
  }
  return g;
}

std::vector<extract::RegionBox> HttpRegionDetector::detect(const std::filesystem::path& pdf,
                                                           const extract::CharDump& dump) {
  std::ifstream in(pdf, std::ios::binary);
  if (!in) throw IngestError(pdf.string(), "cannot open PDF");
  std::ostringstream ss;
  ss << in.rdbuf();
  json pages = json::array();
  for (const auto& p : dump.pages)
    pages.push_back({{"page", p.page_index}, {"width", p.width}, {"height", p.height}});
  const auto reply = parse_reply(
      http_.post_json("/detect", json{{"pdf_base64", base64_encode(ss.str())}, {"pages", pages}}.dump()),
      "/detect");
  try {
    return reply.at("regions").get<std::vector<extract::RegionBox>>();
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("/detect reply: ") + e.what());
  }
}

std::string base64_encode(std::string_view bytes) {
  static constexpr char kAlphabet[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                       (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                       static_cast<unsigned char>(bytes[i + 2]);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  if (const auto rest = bytes.size() - i; rest > 0) {
    unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
    if (rest == 2) v |= static_cast<unsigned char>(bytes[i + 1]) << 8;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += rest == 2 ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

}  // namespace docqa::service
