#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "cluerag/providers/provider.hpp"

namespace cluerag {

// Deterministic stand-in for a hosted LLM. Recognizes the pipeline prompt
// families: unit-extraction prompts get their passage split into sentences
// and wrapped in the expected JSON shape; answer prompts get the first line
// of the supplied context echoed back; query-entity prompts get the rule
// extractor's mentions. An exact-prompt canned table (checked first) lets
// tests script arbitrary replies.
class MockLlm final : public LlmClient {
 public:
  explicit MockLlm(std::map<std::string, std::string> canned = {})
      : canned_(std::move(canned)) {}

  Completion complete(const std::string& prompt, std::size_t max_tokens) override;

 private:
  std::map<std::string, std::string> canned_;
};

// Hash-seeded embeddings: text -> unit-norm vector, stable across runs and
// platforms. Distinct texts essentially never collide.
class MockEmbedder final : public Embedder {
 public:
  explicit MockEmbedder(std::size_t dim = 64) : dim_(dim) {}

  std::vector<Embedding> embed(const std::vector<std::string>& texts) override;
  std::size_t dim() const override { return dim_; }

 private:
  std::size_t dim_;
};

// Embeddings read from a JSON fixture {"dim": D, "vectors": {text: [..]}}.
// Unknown texts are an error: golden tests must enumerate their inputs.
class FixtureEmbedder final : public Embedder {
 public:
  explicit FixtureEmbedder(const std::filesystem::path& path);

  std::vector<Embedding> embed(const std::vector<std::string>& texts) override;
  std::size_t dim() const override { return dim_; }

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, Embedding> vectors_;
  std::string source_;
};

// Scores read from a JSON fixture {"by_query": {q: {passage: score}},
// "default": s?}. A missing pair falls back to "default" when present and
// is otherwise an error.
class FixtureReranker final : public Reranker {
 public:
  explicit FixtureReranker(const std::filesystem::path& path);

  std::vector<double> rerank(const std::string& query,
                             const std::vector<std::string>& passages) override;

 private:
  std::unordered_map<std::string, std::unordered_map<std::string, double>> by_query_;
  bool has_default_ = false;
  double default_score_ = 0.0;
  std::string source_;
};

// Token-overlap re-ranker: |q ∩ p| / |q ∪ p| over lowercased token sets.
// Keeps the pipeline runnable with no model behind it.
class LexicalReranker final : public Reranker {
 public:
  std::vector<double> rerank(const std::string& query,
                             const std::vector<std::string>& passages) override;
};

}  // namespace cluerag
