#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cluerag/graph/build.hpp"
#include "cluerag/providers/provider.hpp"
#include "cluerag/retrieval/query_entities.hpp"
#include "cluerag/vector/vector_set.hpp"

namespace cluerag {

struct RetrievalParams {
  std::size_t k = 3;      // units pulled per frontier entity
  std::size_t depth = 3;  // traversal depth
  std::size_t beam = 5;   // survivors kept per depth
  std::size_t top_n = 5;  // chunks returned
};

// One search state: the entities to expand next, what is left of the query
// embedding after subtracting every collected unit, the collected units in
// canonical order, and the state's re-rank score.
struct BeamState {
  std::vector<std::string> frontier;  // entity ids, ascending
  Embedding residual_query;
  std::vector<std::string> units;  // unit ids, sorted by (unit text, id)
  double score = 0.0;
};

struct TraceEvent {
  std::size_t depth = 0;
  std::vector<std::string> frontier;  // successor frontier
  std::string chosen_unit;
  double score = 0.0;
  bool pruned = false;
};

std::string trace_to_jsonl(const std::vector<TraceEvent>& trace);

struct RetrievalResult {
  std::vector<ScoredId> chunks;      // ranked, at most top_n entries
  std::vector<BeamState> collected;  // every depth's survivors
  std::vector<std::string> anchors;  // seed entity ids, ascending
  std::vector<TraceEvent> trace;
  std::vector<std::string> warnings;
};

// Seed entities: the nearest entity nodes per query mention plus all
// entities of the top-K query-similar units. No mentions extracted narrows
// this to the unit half; an empty graph gives an empty set.
std::vector<std::string> entity_anchoring(const std::string& query,
                                          const Embedding& query_vec,
                                          const GraphIndex& index, Embedder& embedder,
                                          std::size_t k,
                                          const QueryEntityExtractor& extractor);

// Successors of one state: per frontier entity, the top-K adjacent units
// not yet collected ranked by cosine against the residual; each successor
// subtracts the chosen unit's embedding, re-sorts the unit set, scores the
// concatenation, and fronts the chosen unit's entities.
std::vector<BeamState> expand_state(const BeamState& state, const GraphIndex& index,
                                    Reranker& reranker, const std::string& query,
                                    std::size_t k);

struct RetrievalProviders {
  Embedder* embedder = nullptr;
  Reranker* reranker = nullptr;
  const QueryEntityExtractor* query_entities = nullptr;  // nullptr = rule-based
};

// The online pipeline: anchor, expand depth by depth under the beam bound,
// then map every collected unit to its parent chunk and return the top-N
// chunks by re-rank score. Events stream into `trace_sink` (when given) as
// they happen, so an aborted search still leaves the partial trace behind.
RetrievalResult q_iter(const std::string& query, const GraphIndex& index,
                       const RetrievalParams& params,
                       const RetrievalProviders& providers,
                       std::vector<TraceEvent>* trace_sink = nullptr);

}  // namespace cluerag
