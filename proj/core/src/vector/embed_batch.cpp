#include "cluerag/vector/embed_batch.hpp"

#include <algorithm>

#include "cluerag/error.hpp"
#include "cluerag/util/parallel.hpp"

namespace cluerag {

std::vector<Embedding> embed_batch(Embedder& provider, const std::vector<std::string>& texts,
                                   const EmbedBatchOptions& opts) {
  if (opts.batch_size < 1) {
    throw ParseError("embed batch_size must be >= 1");
  }
  if (texts.empty()) {
    return {};
  }

  std::vector<Embedding> out(texts.size());
  const std::size_t batches = (texts.size() + opts.batch_size - 1) / opts.batch_size;
  parallel_for(batches, static_cast<std::size_t>(std::max(opts.threads, 1)),
               [&](std::size_t b) {
                 const std::size_t begin = b * opts.batch_size;
                 const std::size_t end = std::min(begin + opts.batch_size, texts.size());
                 const std::vector<std::string> slice(texts.begin() + begin, texts.begin() + end);
                 auto rows = provider.embed(slice);
                 if (rows.size() != slice.size()) {
                   throw ProviderError("embedder returned " + std::to_string(rows.size()) +
                                       " vectors for " + std::to_string(slice.size()) + " texts");
                 }
                 std::move(rows.begin(), rows.end(), out.begin() + begin);
               });

  const std::size_t expect = provider.dim() > 0 ? provider.dim() : out.front().size();
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() != expect) {
      throw ProviderError("embedding for text " + std::to_string(i) + " has dimension " +
                          std::to_string(out[i].size()) + ", expected " + std::to_string(expect));
    }
  }
  return out;
}

}  // namespace cluerag
