#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cluerag/extraction/ner.hpp"
#include "cluerag/providers/provider.hpp"

namespace cluerag {

// Pulls entity mentions out of a query to seed retrieval. Two built-ins:
// the zero-cost rule-based extractor (default) and an LLM-backed one.
class QueryEntityExtractor {
 public:
  virtual ~QueryEntityExtractor() = default;
  // Mention surface forms, deduplicated, in first-appearance order.
  virtual std::vector<std::string> extract(const std::string& query) const = 0;
};

class NerQueryEntities final : public QueryEntityExtractor {
 public:
  // nullptr selects default_ner(). The extractor does not own the Ner.
  explicit NerQueryEntities(const Ner* ner = nullptr);

  std::vector<std::string> extract(const std::string& query) const override;

 private:
  const Ner* ner_;
};

class LlmQueryEntities final : public QueryEntityExtractor {
 public:
  explicit LlmQueryEntities(LlmClient& llm, std::size_t completion_max_tokens = 256)
      : llm_(&llm), completion_max_tokens_(completion_max_tokens) {}

  // An unparseable reply degrades to the rule-based extractor; transport
  // errors propagate.
  std::vector<std::string> extract(const std::string& query) const override;

 private:
  LlmClient* llm_;
  std::size_t completion_max_tokens_;
};

}  // namespace cluerag
