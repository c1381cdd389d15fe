#include "cluerag/corpus/tokenizer.hpp"

#include <cctype>

namespace cluerag {

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) != 0; }
bool is_space_byte(unsigned char c) { return std::isspace(c) != 0; }

}  // namespace

std::size_t Tokenizer::count(std::string_view text) const {
  return tokenize(text).size();
}

std::vector<Token> WordPunctTokenizer::tokenize(std::string_view text) const {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (is_space_byte(c)) {
      ++i;
      continue;
    }
    if (is_word_byte(c)) {
      std::size_t b = i;
      while (i < n && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
      out.push_back({std::string(text.substr(b, i - b)), b, i});
    } else {
      out.push_back({std::string(1, text[i]), i, i + 1});
      ++i;
    }
  }
  return out;
}

std::vector<std::string> token_texts(const Tokenizer& tok, std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tok.tokenize(text)) {
    out.push_back(std::move(t.text));
  }
  return out;
}

const Tokenizer& default_tokenizer() {
  static const WordPunctTokenizer kInstance;
  return kInstance;
}

}  // namespace cluerag
