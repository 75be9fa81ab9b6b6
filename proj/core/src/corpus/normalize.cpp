#include "docqa/corpus/normalize.hpp"

#include <cctype>

namespace docqa::corpus {
namespace {

bool is_article(std::string_view tok) { return tok == "a" || tok == "an" || tok == "the"; }

bool is_space(unsigned char c) { return std::isspace(c) != 0; }

}  // namespace

std::vector<std::string> normalize_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (!current.empty() && !is_article(current)) out.push_back(current);
    current.clear();
  };
  for (const char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (is_space(c)) {
      flush();
    } else if (c < 0x80 && std::ispunct(c)) {
      // removed without a separator, as in "state-of-the-art" -> "stateoftheart"
      continue;
    } else {
      current.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    }
  }
  flush();
  return out;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string s;
  for (const auto& t : tokens) {
    if (!s.empty()) s.push_back(' ');
    s += t;
  }
  return s;
}

}  // namespace docqa::corpus
