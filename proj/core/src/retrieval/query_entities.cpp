#include "cluerag/retrieval/query_entities.hpp"

#include <unordered_set>

#include "cluerag/extraction/prompts.hpp"
#include "cluerag/extraction/unit_extraction.hpp"

namespace cluerag {

namespace {

std::vector<std::string> dedup_keep_order(const std::vector<std::string>& mentions) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& m : mentions) {
    if (!m.empty() && seen.insert(m).second) {
      out.push_back(m);
    }
  }
  return out;
}

}  // namespace

NerQueryEntities::NerQueryEntities(const Ner* ner)
    : ner_(ner != nullptr ? ner : &default_ner()) {}

std::vector<std::string> NerQueryEntities::extract(const std::string& query) const {
  return dedup_keep_order(ner_->extract(query));
}

std::vector<std::string> LlmQueryEntities::extract(const std::string& query) const {
  const Completion res =
      llm_->complete(render_query_entity_prompt(query), completion_max_tokens_);
  const auto parsed = parse_string_list_reply(res.text, "entities");
  if (!parsed.has_value()) {
    return NerQueryEntities().extract(query);
  }
  return dedup_keep_order(*parsed);
}

}  // namespace cluerag
