#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "docqa/corpus/types.hpp"

namespace docqa::retrieve {

struct Posting {
  std::uint32_t passage = 0;  // position in the document
  std::uint32_t term_frequency = 0;
  bool operator==(const Posting&) const = default;
};

// Per-document inverted index over normalized tokens. Immutable once built.
class InvertedIndex {
 public:
  static InvertedIndex build(const corpus::Document& doc);

  const std::string& doc_id() const { return doc_id_; }
  std::size_t passage_count() const { return passage_ids_.size(); }
  double avg_len() const { return avg_len_; }
  std::uint32_t length(std::size_t passage) const { return lengths_.at(passage); }
  const std::string& passage_id(std::size_t passage) const { return passage_ids_.at(passage); }
  const std::vector<std::string>& passage_ids() const { return passage_ids_; }

  // Empty span for unknown terms.
  std::span<const Posting> postings(const std::string& term) const;
  std::size_t document_frequency(const std::string& term) const { return postings(term).size(); }
  const std::map<std::string, std::vector<Posting>>& terms() const { return postings_; }

  std::string serialize() const;
  static InvertedIndex deserialize(std::string_view text);

  bool operator==(const InvertedIndex&) const = default;

 private:
  std::string doc_id_;
  std::vector<std::string> passage_ids_;
  std::vector<std::uint32_t> lengths_;
  double avg_len_ = 0;
  std::map<std::string, std::vector<Posting>> postings_;
};

}  // namespace docqa::retrieve
