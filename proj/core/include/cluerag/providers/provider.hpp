#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cluerag/vector/embedding.hpp"

namespace cluerag {

enum class ProviderKind { kLlm, kEmbed, kRerank };

// One config per service. `endpoint` selects the implementation:
//   http(s)://...    remote service speaking the wire contract below
//   "mock"           deterministic local stand-in (rerank: lexical overlap)
//   "fixture:<path>" table-driven provider loaded from a JSON file
//   "lexical"        token-overlap re-ranker (rerank only)
// Wire contract: POST /complete {prompt, max_tokens} -> {text, usage};
// POST /embed {texts} -> {vectors}; POST /rerank {query, passages} ->
// {scores}.
struct ProviderConfig {
  ProviderKind kind = ProviderKind::kLlm;
  std::string endpoint = "mock";
  std::string model_name = "default";
  int max_retries = 3;
  int concurrency_cap = 4;
  std::size_t token_limit = 8000;  // LLM prompt budget, tokens
  int backoff_base_ms = 100;       // doubles per retry
};

struct CompletionUsage {
  std::size_t prompt_tokens = 0;
  std::size_t completion_tokens = 0;
};

struct Completion {
  std::string text;
  CompletionUsage usage;  // as reported by the provider; may be zero
};

class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual Completion complete(const std::string& prompt, std::size_t max_tokens) = 0;
};

class Embedder {
 public:
  virtual ~Embedder() = default;
  // One embedding per text, order-preserving. All rows must share one
  // dimension; implementations throw ProviderError otherwise.
  virtual std::vector<Embedding> embed(const std::vector<std::string>& texts) = 0;
  // Configured dimension, or 0 when only the service knows it.
  virtual std::size_t dim() const { return 0; }
};

class Reranker {
 public:
  virtual ~Reranker() = default;
  // One relevance score per passage, order-aligned, higher is better.
  virtual std::vector<double> rerank(const std::string& query,
                                     const std::vector<std::string>& passages) = 0;
};

}  // namespace cluerag
