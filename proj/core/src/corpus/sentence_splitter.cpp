#include "cluerag/corpus/sentence_splitter.hpp"

#include <cctype>
#include <unordered_set>

#include "cluerag/util/text.hpp"

namespace cluerag {

namespace {

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

bool is_closer(char c) {
  return c == '"' || c == '\'' || c == ')' || c == ']' || c == '}';
}

bool is_opener(char c) {
  return c == '"' || c == '\'' || c == '(' || c == '[' || c == '{';
}

bool starts_sentence(char c) {
  const unsigned char u = static_cast<unsigned char>(c);
  return std::isupper(u) != 0 || std::isdigit(u) != 0 || is_opener(c);
}

const std::unordered_set<std::string>& abbreviations() {
  static const std::unordered_set<std::string> kSet = {
      "dr", "mr", "mrs", "ms", "prof", "st", "jr",  "sr",   "vs",  "etc",
      "eg", "ie", "inc", "ltd", "co",   "corp", "no", "vol",  "fig", "figs",
      "al", "dept",
  };
  return kSet;
}

// Word immediately before position `dot` (exclusive), lowercased with any
// interior dots removed: "Dr" -> "dr", "e.g" -> "eg".
std::string preceding_word(std::string_view text, std::size_t dot) {
  std::size_t b = dot;
  while (b > 0) {
    const unsigned char c = static_cast<unsigned char>(text[b - 1]);
    if (std::isalnum(c) != 0 || c == '.') {
      --b;
    } else {
      break;
    }
  }
  std::string word;
  for (std::size_t i = b; i < dot; ++i) {
    if (text[i] != '.') {
      word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
    }
  }
  return word;
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  const std::size_t n = text.size();
  std::size_t start = 0;
  std::size_t i = 0;
  auto flush = [&](std::size_t end_pos) {
    std::string s = trim(text.substr(start, end_pos - start));
    if (!s.empty()) {
      out.push_back(std::move(s));
    }
  };
  while (i < n) {
    if (!is_terminal(text[i])) {
      ++i;
      continue;
    }
    const std::size_t punct_begin = i;
    bool has_period = false;
    while (i < n && is_terminal(text[i])) {
      has_period = has_period || text[i] == '.';
      ++i;
    }
    while (i < n && is_closer(text[i])) {
      ++i;
    }
    const std::size_t boundary = i;
    // Decimals, version strings, and domain names keep their dot glued to
    // the next character; a real boundary needs whitespace or end of text.
    std::size_t j = boundary;
    while (j < n && std::isspace(static_cast<unsigned char>(text[j])) != 0) {
      ++j;
    }
    const bool gap = j > boundary;
    const bool at_end = j >= n;
    if (!at_end && (!gap || !starts_sentence(text[j]))) {
      continue;
    }
    if (has_period && abbreviations().count(preceding_word(text, punct_begin)) > 0) {
      continue;
    }
    flush(boundary);
    start = j;
    i = j;
  }
  if (start < n) {
    flush(n);
  }
  return out;
}

}  // namespace cluerag
