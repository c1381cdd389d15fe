#pragma once

#include <cstddef>
#include <vector>

#include "cluerag/corpus/tokenizer.hpp"
#include "cluerag/corpus/types.hpp"

namespace cluerag {

inline constexpr std::size_t kDefaultChunkCap = 256;

// Segments a document into chunks of at most `cap` tokens. Whole sentences
// are packed greedily; a single sentence longer than the cap is hard-split
// at token boundaries so token counts stay additive. Chunk ids are
// "<doc_id>#<index>" with index counting from 0. Throws on cap < 1.
std::vector<Chunk> chunk_document(const Document& doc, std::size_t cap,
                                  const Tokenizer& tok = default_tokenizer());

}  // namespace cluerag
