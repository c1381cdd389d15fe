#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>

#include "cluerag/corpus/types.hpp"
#include "cluerag/extraction/types.hpp"

namespace cluerag {

// Tri-partite index graph: chunk, knowledge-unit, and entity layers with
// chunk-unit and entity-unit edges only. Every unit carries exactly one
// parent chunk, so the chunk-unit edge set is exactly the unit set; entity
// nodes exist only while at least one edge references them. Node maps are
// id-ordered, which makes iteration (and everything derived from it, like
// the persisted form) deterministic.
class MultipartiteGraph {
 public:
  void add_chunk(const Chunk& chunk);
  // Parent chunk must already exist.
  void add_unit(const KnowledgeUnit& unit);
  // Creates the entity node on first use (first surface form wins) and adds
  // the entity-unit edge; repeated links are no-ops.
  void link_entity(const Entity& entity, const std::string& unit_id);

  std::size_t chunk_count() const { return chunks_.size(); }
  std::size_t unit_count() const { return units_.size(); }
  std::size_t entity_count() const { return entities_.size(); }
  std::size_t entity_edge_count() const { return edges_e_.size(); }

  bool has_chunk(const std::string& id) const { return chunks_.count(id) != 0; }
  bool has_unit(const std::string& id) const { return units_.count(id) != 0; }
  bool has_entity(const std::string& id) const { return entities_.count(id) != 0; }

  const Chunk& chunk(const std::string& id) const;
  const KnowledgeUnit& unit(const std::string& id) const;
  const Entity& entity(const std::string& id) const;

  const std::map<std::string, Chunk>& chunks() const { return chunks_; }
  const std::map<std::string, KnowledgeUnit>& units() const { return units_; }
  const std::map<std::string, Entity>& entities() const { return entities_; }
  const std::set<std::pair<std::string, std::string>>& entity_edges() const {
    return edges_e_;
  }

  const std::set<std::string>& units_of_entity(const std::string& entity_id) const;
  const std::set<std::string>& entities_of_unit(const std::string& unit_id) const;
  const std::string& chunk_of_unit(const std::string& unit_id) const;
  const std::set<std::string>& units_of_chunk(const std::string& chunk_id) const;

  // Re-checks every structural invariant; throws InvariantError on the
  // first violation. Cheap enough to run after every load.
  void validate() const;

 private:
  std::map<std::string, Chunk> chunks_;
  std::map<std::string, KnowledgeUnit> units_;
  std::map<std::string, Entity> entities_;
  std::set<std::pair<std::string, std::string>> edges_e_;  // (entity_id, unit_id)

  std::map<std::string, std::set<std::string>> chunk_units_;
  std::map<std::string, std::set<std::string>> unit_entities_;
  std::map<std::string, std::set<std::string>> entity_units_;
};

// Counts report in JSON: node counts per layer (the published index tables
// report texts / knowledge / entities), edge counts, units by source, and
// degree histograms.
std::string stats_to_json(const MultipartiteGraph& g);

}  // namespace cluerag
