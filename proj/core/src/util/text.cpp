#include "cluerag/util/text.hpp"

#include <cctype>

namespace cluerag {

namespace {

bool is_space(unsigned char c) { return std::isspace(c) != 0; }

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) {
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && is_space(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_ws = true;  // swallows leading whitespace
  for (unsigned char c : s) {
    if (is_space(c)) {
      in_ws = true;
    } else {
      if (in_ws && !out.empty()) {
        out.push_back(' ');
      }
      in_ws = false;
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t b = i;
    while (i < s.size() && !is_space(static_cast<unsigned char>(s[i]))) ++i;
    if (i > b) {
      out.emplace_back(s.substr(b, i - b));
    }
  }
  return out;
}

std::string normalize_entity(std::string_view mention) {
  return to_lower(collapse_whitespace(mention));
}

}  // namespace cluerag
