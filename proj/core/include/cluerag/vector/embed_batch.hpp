#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cluerag/providers/provider.hpp"
#include "cluerag/vector/embedding.hpp"

namespace cluerag {

struct EmbedBatchOptions {
  std::size_t batch_size = 64;  // texts per provider call
  int threads = 4;              // concurrent provider calls
};

// Embeds `texts` in order through the provider, splitting into batches and
// issuing them concurrently. Every row is checked against the provider's
// declared dimension (or, failing that, the first row's); a mismatch or a
// short response is an error. Empty input makes no provider call.
std::vector<Embedding> embed_batch(Embedder& provider, const std::vector<std::string>& texts,
                                   const EmbedBatchOptions& opts = {});

}  // namespace cluerag
