#include "cluerag/graph/graph.hpp"

#include <json.hpp>

#include "cluerag/error.hpp"
#include "cluerag/util/text.hpp"

namespace cluerag {

namespace {

[[noreturn]] void unknown(const char* kind, const std::string& id) {
  throw InvariantError(std::string("unknown ") + kind + " id '" + id + "'");
}

}  // namespace

void MultipartiteGraph::add_chunk(const Chunk& chunk) {
  if (chunk.id.empty() || chunk.text.empty()) {
    throw ParseError("chunk id and text must be non-empty");
  }
  if (!chunks_.emplace(chunk.id, chunk).second) {
    throw ParseError("duplicate chunk id '" + chunk.id + "'");
  }
  chunk_units_.emplace(chunk.id, std::set<std::string>{});
}

void MultipartiteGraph::add_unit(const KnowledgeUnit& unit) {
  if (unit.unit_id.empty() || unit.text.empty()) {
    throw ParseError("unit id and text must be non-empty");
  }
  const auto parent = chunk_units_.find(unit.chunk_id);
  if (parent == chunk_units_.end()) {
    throw InvariantError("unit '" + unit.unit_id + "' references missing chunk '" +
                         unit.chunk_id + "'");
  }
  if (!units_.emplace(unit.unit_id, unit).second) {
    throw ParseError("duplicate unit id '" + unit.unit_id + "'");
  }
  parent->second.insert(unit.unit_id);
  unit_entities_.emplace(unit.unit_id, std::set<std::string>{});
}

void MultipartiteGraph::link_entity(const Entity& entity, const std::string& unit_id) {
  if (entity.entity_id.empty() || entity.normalized.empty()) {
    throw ParseError("entity id and normalized form must be non-empty");
  }
  const auto unit_adj = unit_entities_.find(unit_id);
  if (unit_adj == unit_entities_.end()) {
    unknown("unit", unit_id);
  }
  const auto [it, inserted] = entities_.emplace(entity.entity_id, entity);
  if (!inserted && it->second.normalized != entity.normalized) {
    throw InvariantError("entity id '" + entity.entity_id +
                         "' maps to two normalized forms: '" + it->second.normalized +
                         "' and '" + entity.normalized + "'");
  }
  edges_e_.emplace(entity.entity_id, unit_id);
  unit_adj->second.insert(entity.entity_id);
  entity_units_[entity.entity_id].insert(unit_id);
}

const Chunk& MultipartiteGraph::chunk(const std::string& id) const {
  const auto it = chunks_.find(id);
  if (it == chunks_.end()) {
    unknown("chunk", id);
  }
  return it->second;
}

const KnowledgeUnit& MultipartiteGraph::unit(const std::string& id) const {
  const auto it = units_.find(id);
  if (it == units_.end()) {
    unknown("unit", id);
  }
  return it->second;
}

const Entity& MultipartiteGraph::entity(const std::string& id) const {
  const auto it = entities_.find(id);
  if (it == entities_.end()) {
    unknown("entity", id);
  }
  return it->second;
}

const std::set<std::string>& MultipartiteGraph::units_of_entity(
    const std::string& entity_id) const {
  const auto it = entity_units_.find(entity_id);
  if (it == entity_units_.end()) {
    unknown("entity", entity_id);
  }
  return it->second;
}

const std::set<std::string>& MultipartiteGraph::entities_of_unit(
    const std::string& unit_id) const {
  const auto it = unit_entities_.find(unit_id);
  if (it == unit_entities_.end()) {
    unknown("unit", unit_id);
  }
  return it->second;
}

const std::string& MultipartiteGraph::chunk_of_unit(const std::string& unit_id) const {
  return unit(unit_id).chunk_id;
}

const std::set<std::string>& MultipartiteGraph::units_of_chunk(
    const std::string& chunk_id) const {
  const auto it = chunk_units_.find(chunk_id);
  if (it == chunk_units_.end()) {
    unknown("chunk", chunk_id);
  }
  return it->second;
}

void MultipartiteGraph::validate() const {
  for (const auto& [id, unit] : units_) {
    if (unit.text.empty()) {
      throw InvariantError("unit '" + id + "' has empty text");
    }
    if (chunks_.count(unit.chunk_id) == 0) {
      throw InvariantError("unit '" + id + "' has missing parent '" + unit.chunk_id + "'");
    }
    if (entities_.count(id) != 0 || chunks_.count(id) != 0) {
      throw InvariantError("id '" + id + "' appears in more than one layer");
    }
  }
  for (const auto& [id, entity] : entities_) {
    const auto adj = entity_units_.find(id);
    if (adj == entity_units_.end() || adj->second.empty()) {
      throw InvariantError("entity '" + id + "' has degree 0");
    }
    if (entity.normalized != normalize_entity(entity.normalized)) {
      throw InvariantError("entity '" + id + "' normalized form is not canonical");
    }
    if (chunks_.count(id) != 0) {
      throw InvariantError("id '" + id + "' appears in more than one layer");
    }
  }
  for (const auto& [entity_id, unit_id] : edges_e_) {
    if (entities_.count(entity_id) == 0 || units_.count(unit_id) == 0) {
      throw InvariantError("edge (" + entity_id + ", " + unit_id +
                           ") has a missing endpoint");
    }
  }
  for (const auto& [chunk_id, unit_ids] : chunk_units_) {
    for (const auto& unit_id : unit_ids) {
      const auto it = units_.find(unit_id);
      if (it == units_.end() || it->second.chunk_id != chunk_id) {
        throw InvariantError("chunk adjacency for '" + chunk_id +
                             "' disagrees with unit '" + unit_id + "'");
      }
    }
  }
}

std::string stats_to_json(const MultipartiteGraph& g) {
  std::size_t llm_units = 0;
  for (const auto& [id, unit] : g.units()) {
    llm_units += unit.source == UnitSource::kLlm ? 1 : 0;
  }

  std::map<std::string, std::size_t> entity_degrees;
  for (const auto& [id, entity] : g.entities()) {
    entity_degrees[std::to_string(g.units_of_entity(id).size())] += 1;
  }
  std::map<std::string, std::size_t> unit_degrees;
  for (const auto& [id, unit] : g.units()) {
    unit_degrees[std::to_string(g.entities_of_unit(id).size())] += 1;
  }

  nlohmann::json j;
  j["nodes"] = {{"texts", g.chunk_count()},
                {"knowledge", g.unit_count()},
                {"entities", g.entity_count()}};
  j["edges"] = {{"chunk_unit", g.unit_count()},
                {"entity_unit", g.entity_edge_count()}};
  j["units_by_source"] = {{"llm", llm_units}, {"nlp", g.unit_count() - llm_units}};
  j["entity_degree_histogram"] = entity_degrees;
  j["unit_entity_count_histogram"] = unit_degrees;
  return j.dump(2) + "\n";
}

}  // namespace cluerag
