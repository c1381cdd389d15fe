#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cluerag/providers/provider.hpp"

namespace cluerag {

namespace detail {

// Shared POST-JSON transport: bounded concurrency, max_retries retries with
// exponential backoff, body parsing. Throws ProviderError once the retry
// budget is spent.
class HttpTransport {
 public:
  explicit HttpTransport(ProviderConfig cfg);
  ~HttpTransport();

  // Returns the parsed response body for POST {endpoint}{path}.
  std::string post_json(const std::string& path, const std::string& body);

  const ProviderConfig& config() const { return cfg_; }

 private:
  ProviderConfig cfg_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace detail

class HttpLlm final : public LlmClient {
 public:
  explicit HttpLlm(const ProviderConfig& cfg) : transport_(cfg) {}
  Completion complete(const std::string& prompt, std::size_t max_tokens) override;

 private:
  detail::HttpTransport transport_;
};

class HttpEmbedder final : public Embedder {
 public:
  explicit HttpEmbedder(const ProviderConfig& cfg) : transport_(cfg) {}
  std::vector<Embedding> embed(const std::vector<std::string>& texts) override;

 private:
  detail::HttpTransport transport_;
};

class HttpReranker final : public Reranker {
 public:
  explicit HttpReranker(const ProviderConfig& cfg) : transport_(cfg) {}
  std::vector<double> rerank(const std::string& query,
                             const std::vector<std::string>& passages) override;

 private:
  detail::HttpTransport transport_;
};

}  // namespace cluerag
