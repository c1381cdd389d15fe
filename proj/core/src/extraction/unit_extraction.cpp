#include "cluerag/extraction/unit_extraction.hpp"

#include <algorithm>
#include <unordered_map>

#include <json.hpp>

#include "cluerag/corpus/sentence_splitter.hpp"
#include "cluerag/error.hpp"
#include "cluerag/extraction/prompts.hpp"
#include "cluerag/util/hash.hpp"
#include "cluerag/util/parallel.hpp"
#include "cluerag/util/text.hpp"

namespace cluerag {

std::string make_unit_id(const std::string& chunk_id, std::size_t ordinal,
                         const std::string& text) {
  return stable_id("u|" + chunk_id + "|" + std::to_string(ordinal) + "|" + text);
}

std::string make_entity_id(const std::string& normalized) {
  return stable_id("e|" + normalized);
}

namespace {

// Drops markdown code fences, keeping what is between the first fence line
// and its closer (or everything after the fence when unclosed).
std::string strip_code_fences(std::string_view text) {
  const std::size_t open = text.find("```");
  if (open == std::string_view::npos) {
    return std::string(text);
  }
  std::size_t body = text.find('\n', open);
  if (body == std::string_view::npos) {
    return std::string(text.substr(0, open));
  }
  ++body;
  const std::size_t close = text.find("```", body);
  if (close == std::string_view::npos) {
    return std::string(text.substr(body));
  }
  return std::string(text.substr(body, close - body));
}

// Removes commas that directly precede a closing bracket, outside strings.
std::string drop_trailing_commas(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      out.push_back(c);
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
      out.push_back(c);
      continue;
    }
    if (c == ',') {
      std::size_t j = i + 1;
      while (j < text.size() &&
             std::isspace(static_cast<unsigned char>(text[j])) != 0) {
        ++j;
      }
      if (j < text.size() && (text[j] == ']' || text[j] == '}')) {
        continue;  // drop the comma, keep the whitespace
      }
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::optional<std::vector<std::string>> parse_string_list_reply(std::string_view reply,
                                                                const std::string& key) {
  const std::string defenced = strip_code_fences(reply);
  const std::size_t open = defenced.find('{');
  const std::size_t close = defenced.rfind('}');
  if (open == std::string::npos || close == std::string::npos || close < open) {
    return std::nullopt;
  }
  const std::string body =
      drop_trailing_commas(std::string_view(defenced).substr(open, close - open + 1));
  const nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains(key) || !j[key].is_array()) {
    return std::nullopt;
  }
  std::vector<std::string> items;
  for (const auto& item : j[key]) {
    if (!item.is_string()) {
      return std::nullopt;
    }
    std::string text = trim(item.get<std::string>());
    if (!text.empty()) {
      items.push_back(std::move(text));
    }
  }
  return items;
}

std::optional<std::vector<std::string>> parse_units_reply(std::string_view reply) {
  return parse_string_list_reply(reply, "knowledge units");
}

std::vector<KnowledgeUnit> extract_units_nlp(const Chunk& chunk) {
  std::vector<KnowledgeUnit> out;
  for (const auto& sentence : split_sentences(chunk.text)) {
    out.push_back({make_unit_id(chunk.id, out.size(), sentence), chunk.id, sentence,
                   UnitSource::kNlp});
  }
  return out;
}

LlmUnitsOutcome extract_units_llm(const Chunk& chunk, LlmClient& llm,
                                  std::size_t completion_max_tokens) {
  LlmUnitsOutcome outcome;
  std::string prompt = render_unit_extraction_prompt(chunk.text);
  std::optional<std::vector<std::string>> parsed;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const Completion res = llm.complete(prompt, completion_max_tokens);
    outcome.tokens_in += res.usage.prompt_tokens;
    outcome.tokens_out += res.usage.completion_tokens;
    parsed = parse_units_reply(res.text);
    if (parsed.has_value()) {
      break;
    }
    prompt += "\nJUST OUTPUT THE RESULTS IN JSON FORMAT!";
  }

  if (!parsed.has_value()) {
    outcome.fell_back = true;
    outcome.warnings.push_back("chunk " + chunk.id +
                               ": unusable extraction replies, sentence-split fallback");
    outcome.units = extract_units_nlp(chunk);
    return outcome;
  }
  if (parsed->empty()) {
    outcome.warnings.push_back("chunk " + chunk.id + ": extraction returned no units");
  }
  for (const auto& text : *parsed) {
    outcome.units.push_back({make_unit_id(chunk.id, outcome.units.size(), text), chunk.id,
                             text, UnitSource::kLlm});
  }
  return outcome;
}

std::vector<Entity> extract_entities(const KnowledgeUnit& unit, const Ner& ner,
                                     std::vector<std::string>* warnings) {
  std::vector<std::string> surfaces;
  try {
    surfaces = ner.extract(unit.text);
  } catch (const std::exception& e) {
    if (warnings != nullptr) {
      warnings->push_back("entity extraction failed for unit " + unit.unit_id + ": " +
                          e.what());
    }
    return {};
  }

  std::vector<Entity> out;
  std::unordered_set<std::string> seen;
  for (const auto& surface : surfaces) {
    std::string normalized = normalize_entity(surface);
    if (normalized.empty() || !seen.insert(normalized).second) {
      continue;
    }
    out.push_back({make_entity_id(normalized), surface, std::move(normalized)});
  }
  return out;
}

std::string extraction_log_to_jsonl(const std::vector<ExtractionLogEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    const nlohmann::json j{{"chunk_id", e.chunk_id},
                           {"route", e.route},
                           {"unit_count", e.unit_count},
                           {"llm_tokens_in", e.llm_tokens_in},
                           {"llm_tokens_out", e.llm_tokens_out}};
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

HybridExtraction hybrid_extract(const std::vector<Chunk>& chunks,
                                const std::unordered_set<std::string>& core,
                                const ExtractionOptions& opts) {
  std::unordered_set<std::string> ids;
  for (const auto& chunk : chunks) {
    ids.insert(chunk.id);
  }
  for (const auto& id : core) {
    if (ids.count(id) == 0) {
      throw ParseError("core chunk id '" + id + "' is not in the corpus");
    }
  }
  if (!core.empty() && opts.llm == nullptr) {
    throw ParseError("core chunks require an LLM provider");
  }
  const Ner& ner = opts.ner != nullptr ? *opts.ner : default_ner();

  struct Slot {
    std::vector<KnowledgeUnit> units;
    std::vector<std::vector<Entity>> unit_entities;  // parallel to units
    ExtractionLogEntry log;
    std::vector<std::string> warnings;
  };
  std::vector<Slot> slots(chunks.size());

  parallel_for(chunks.size(), std::max<std::size_t>(opts.threads, 1), [&](std::size_t i) {
    const Chunk& chunk = chunks[i];
    Slot& slot = slots[i];
    slot.log.chunk_id = chunk.id;
    if (core.count(chunk.id) != 0) {
      auto outcome = extract_units_llm(chunk, *opts.llm, opts.completion_max_tokens);
      slot.units = std::move(outcome.units);
      slot.warnings = std::move(outcome.warnings);
      slot.log.route = outcome.fell_back ? "llm-fallback" : "llm";
      slot.log.llm_tokens_in = outcome.tokens_in;
      slot.log.llm_tokens_out = outcome.tokens_out;
    } else {
      slot.units = extract_units_nlp(chunk);
      slot.log.route = "nlp";
    }
    slot.log.unit_count = slot.units.size();
    for (const auto& unit : slot.units) {
      slot.unit_entities.push_back(extract_entities(unit, ner, &slot.warnings));
    }
  });

  // Single-writer merge in chunk order keeps the result deterministic.
  HybridExtraction out;
  std::unordered_map<std::string, std::size_t> entity_index;
  for (auto& slot : slots) {
    for (std::size_t u = 0; u < slot.units.size(); ++u) {
      const std::string& unit_id = slot.units[u].unit_id;
      for (auto& entity : slot.unit_entities[u]) {
        const auto [it, inserted] =
            entity_index.emplace(entity.normalized, out.entities.size());
        if (inserted) {
          out.entities.push_back(std::move(entity));
        }
        out.links.emplace_back(out.entities[it->second].entity_id, unit_id);
      }
      out.units.push_back(std::move(slot.units[u]));
    }
    out.log.push_back(std::move(slot.log));
    for (auto& w : slot.warnings) {
      out.warnings.push_back(std::move(w));
    }
  }
  return out;
}

}  // namespace cluerag
