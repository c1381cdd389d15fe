#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cluerag {

struct Document {
  std::string id;
  std::optional<std::string> title;
  std::string text;

  bool operator==(const Document&) const = default;
};

struct Chunk {
  std::string id;      // "<doc_id>#<index>" when produced by the chunker
  std::string doc_id;
  std::string text;
  std::size_t token_len = 0;  // tokenizer count of text; must stay <= the chunk cap

  bool operator==(const Chunk&) const = default;
};

}  // namespace cluerag
