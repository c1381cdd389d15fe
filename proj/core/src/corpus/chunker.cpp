#include "cluerag/corpus/chunker.hpp"

#include <string>

#include "cluerag/corpus/sentence_splitter.hpp"
#include "cluerag/error.hpp"

namespace cluerag {

std::vector<Chunk> chunk_document(const Document& doc, std::size_t cap, const Tokenizer& tok) {
  if (cap < 1) {
    throw ParseError("chunk cap must be >= 1, got " + std::to_string(cap));
  }
  std::vector<Chunk> out;
  std::string cur;
  std::size_t cur_tokens = 0;
  auto flush = [&] {
    if (cur_tokens == 0) {
      return;
    }
    Chunk c;
    c.id = doc.id + "#" + std::to_string(out.size());
    c.doc_id = doc.id;
    c.text = std::move(cur);
    c.token_len = cur_tokens;
    out.push_back(std::move(c));
    cur.clear();
    cur_tokens = 0;
  };
  auto append = [&](std::string_view piece, std::size_t piece_tokens) {
    if (!cur.empty()) {
      cur.push_back(' ');
    }
    cur.append(piece);
    cur_tokens += piece_tokens;
  };

  for (const std::string& sentence : split_sentences(doc.text)) {
    const std::vector<Token> toks = tok.tokenize(sentence);
    const std::size_t n = toks.size();
    if (n == 0) {
      continue;
    }
    if (n <= cap) {
      if (cur_tokens + n > cap) {
        flush();
      }
      append(sentence, n);
      continue;
    }
    // Oversized sentence: cut at token boundaries. Full-cap slices become
    // chunks of their own; the tail keeps packing with later sentences.
    flush();
    std::size_t idx = 0;
    while (idx < n) {
      const std::size_t take = std::min(cap, n - idx);
      const std::size_t from = toks[idx].begin;
      const std::size_t to = toks[idx + take - 1].end;
      std::string_view piece = std::string_view(sentence).substr(from, to - from);
      if (take == cap) {
        append(piece, take);
        flush();
      } else {
        append(piece, take);
      }
      idx += take;
    }
  }
  flush();
  return out;
}

}  // namespace cluerag
