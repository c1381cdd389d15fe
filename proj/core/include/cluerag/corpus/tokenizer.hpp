#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace cluerag {

struct Token {
  std::string text;
  std::size_t begin = 0;  // byte offset into the source string
  std::size_t end = 0;    // one past the last byte
};

// Tokenization contract shared by chunking, token accounting, and the
// lexical metrics. Implementations must be deterministic; splitting a string
// at a token boundary must never change the total token count.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<Token> tokenize(std::string_view text) const = 0;
  virtual std::size_t count(std::string_view text) const;
  virtual std::string name() const = 0;
};

// Splits into maximal alphanumeric runs; every other non-whitespace byte is
// a single-character token. "U.S.-based" -> {U . S . - based}.
class WordPunctTokenizer final : public Tokenizer {
 public:
  std::vector<Token> tokenize(std::string_view text) const override;
  std::string name() const override { return "wordpunct"; }
};

// Convenience: token texts only.
std::vector<std::string> token_texts(const Tokenizer& tok, std::string_view text);

const Tokenizer& default_tokenizer();

}  // namespace cluerag
