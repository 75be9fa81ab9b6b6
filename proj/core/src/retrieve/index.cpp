#include "docqa/retrieve/index.hpp"

#include "docqa/corpus/normalize.hpp"
#include "docqa/error.hpp"
#include "json_io.hpp"

namespace docqa::retrieve {

InvertedIndex InvertedIndex::build(const corpus::Document& doc) {
  if (doc.passages.empty())
    throw ValidationError("cannot index document '" + doc.doc_id + "' with no passages");
  InvertedIndex idx;
  idx.doc_id_ = doc.doc_id;
  std::uint64_t total = 0;
  for (std::uint32_t i = 0; i < doc.passages.size(); ++i) {
    const auto tokens = corpus::normalize_tokens(doc.passages[i].text);
    idx.passage_ids_.push_back(doc.passages[i].passage_id);
    idx.lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));
    total += tokens.size();
    std::map<std::string_view, std::uint32_t> tf;
    for (const auto& t : tokens) ++tf[t];
    for (const auto& [term, count] : tf) idx.postings_[std::string(term)].push_back({i, count});
  }
  idx.avg_len_ = static_cast<double>(total) / static_cast<double>(doc.passages.size());
  return idx;
}

std::span<const Posting> InvertedIndex::postings(const std::string& term) const {
  auto it = postings_.find(term);
  if (it == postings_.end()) return {};
  return it->second;
}

std::string InvertedIndex::serialize() const {
  json postings = json::object();
  for (const auto& [term, list] : postings_) {
    json arr = json::array();
    for (const auto& p : list) arr.push_back({p.passage, p.term_frequency});
    postings[term] = std::move(arr);
  }
  return json{{"doc_id", doc_id_},
              {"passage_ids", passage_ids_},
              {"lengths", lengths_},
              {"avg_len", avg_len_},
              {"postings", std::move(postings)}}
      .dump();
}

InvertedIndex InvertedIndex::deserialize(std::string_view text) {
  InvertedIndex idx;
  try {
    const auto j = json::parse(text);
    idx.doc_id_ = j.at("doc_id").get<std::string>();
    idx.passage_ids_ = j.at("passage_ids").get<std::vector<std::string>>();
    idx.lengths_ = j.at("lengths").get<std::vector<std::uint32_t>>();
    idx.avg_len_ = j.at("avg_len").get<double>();
    for (const auto& [term, arr] : j.at("postings").items()) {
      auto& list = idx.postings_[term];
      for (const auto& p : arr) {
        const auto pos = p.at(0).get<std::uint32_t>();
        if (pos >= idx.passage_ids_.size())
          throw ValidationError("index snapshot posting references unknown passage");
        list.push_back({pos, p.at(1).get<std::uint32_t>()});
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad index snapshot: ") + e.what());
  }
  if (idx.lengths_.size() != idx.passage_ids_.size())
    throw ValidationError("index snapshot lengths do not match passage count");
  return idx;
}

}  // namespace docqa::retrieve
