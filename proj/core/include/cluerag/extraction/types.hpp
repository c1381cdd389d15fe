#pragma once

#include <string>

namespace cluerag {

enum class UnitSource { kLlm, kNlp };

constexpr const char* to_string(UnitSource s) {
  return s == UnitSource::kLlm ? "llm" : "nlp";
}

// Atomic statement extracted from exactly one parent chunk. `source` records
// how the unit was actually produced; when an unparseable LLM reply forces
// the sentence-split fallback, a core chunk can legitimately carry nlp
// units.
struct KnowledgeUnit {
  std::string unit_id;
  std::string chunk_id;
  std::string text;
  UnitSource source = UnitSource::kNlp;

  bool operator==(const KnowledgeUnit&) const = default;
};

// Entity mention deduplicated graph-wide by its normalized form.
struct Entity {
  std::string entity_id;
  std::string surface;     // first surface form encountered
  std::string normalized;  // lowercased, whitespace-collapsed dedup key

  bool operator==(const Entity&) const = default;
};

// Content-addressed ids keep rebuilds reproducible.
std::string make_unit_id(const std::string& chunk_id, std::size_t ordinal,
                         const std::string& text);
std::string make_entity_id(const std::string& normalized);

}  // namespace cluerag
