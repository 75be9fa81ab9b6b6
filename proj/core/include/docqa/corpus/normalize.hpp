#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace docqa::corpus {

// SQuAD-style answer normalization: ASCII-lowercase, drop ASCII punctuation,
// drop the articles "a", "an", "the", then split on whitespace. All token
// metrics (Answer-F1, extraction scores, BM25 terms) go through this.
std::vector<std::string> normalize_tokens(std::string_view text);

std::string join_tokens(const std::vector<std::string>& tokens);

}  // namespace docqa::corpus
