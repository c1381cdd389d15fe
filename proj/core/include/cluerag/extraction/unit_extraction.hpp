#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cluerag/corpus/types.hpp"
#include "cluerag/extraction/ner.hpp"
#include "cluerag/extraction/types.hpp"
#include "cluerag/providers/provider.hpp"

namespace cluerag {

// Pulls the "knowledge units" string list out of an LLM reply. Tolerates
// code fences, leading chatter around the JSON object, and trailing commas.
// Returns nullopt when no usable object can be recovered; empty-but-valid
// replies give an empty list.
std::optional<std::vector<std::string>> parse_units_reply(std::string_view reply);

// Same recovery for any {"<key>": [strings]} reply shape.
std::optional<std::vector<std::string>> parse_string_list_reply(std::string_view reply,
                                                                const std::string& key);

// One unit per sentence, in order, tagged nlp.
std::vector<KnowledgeUnit> extract_units_nlp(const Chunk& chunk);

struct LlmUnitsOutcome {
  std::vector<KnowledgeUnit> units;
  bool fell_back = false;  // reply unusable twice, sentence-split instead
  std::size_t tokens_in = 0;
  std::size_t tokens_out = 0;
  std::vector<std::string> warnings;
};

// Prompts the LLM to decompose the chunk. An unparseable reply is retried
// once with the output-format reminder repeated; a second failure falls
// back to extract_units_nlp. Transport errors propagate.
LlmUnitsOutcome extract_units_llm(const Chunk& chunk, LlmClient& llm,
                                  std::size_t completion_max_tokens);

// Entities of one unit, deduplicated by normalized form, first surface form
// kept. A throwing extractor degrades to an empty list with a warning.
std::vector<Entity> extract_entities(const KnowledgeUnit& unit, const Ner& ner,
                                     std::vector<std::string>* warnings = nullptr);

struct ExtractionLogEntry {
  std::string chunk_id;
  std::string route;  // "llm", "nlp", or "llm-fallback"
  std::size_t unit_count = 0;
  std::size_t llm_tokens_in = 0;
  std::size_t llm_tokens_out = 0;
};

std::string extraction_log_to_jsonl(const std::vector<ExtractionLogEntry>& entries);

struct ExtractionOptions {
  LlmClient* llm = nullptr;  // required when core is non-empty
  const Ner* ner = nullptr;  // nullptr selects default_ner()
  std::size_t completion_max_tokens = 2048;
  std::size_t threads = 4;  // concurrent chunk extractions
};

struct HybridExtraction {
  std::vector<KnowledgeUnit> units;  // chunk order, then unit ordinal
  std::vector<Entity> entities;      // first-appearance order, deduped
  std::vector<std::pair<std::string, std::string>> links;  // (entity_id, unit_id)
  std::vector<ExtractionLogEntry> log;                     // chunk order
  std::vector<std::string> warnings;
};

// Routes every chunk: members of `core` go through the LLM, the rest are
// sentence-split. Entity extraction runs on every unit either way. Members
// of `core` must name existing chunks.
HybridExtraction hybrid_extract(const std::vector<Chunk>& chunks,
                                const std::unordered_set<std::string>& core,
                                const ExtractionOptions& opts);

}  // namespace cluerag
