#include "cluerag/retrieval/retrieval.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "cluerag/error.hpp"

namespace cluerag {

namespace {

// Canonical unit order: lexicographic by unit text, ties by id. Equal unit
// sets concatenate identically, so they re-rank identically.
void canonical_sort(std::vector<std::string>& unit_ids, const MultipartiteGraph& g) {
  std::sort(unit_ids.begin(), unit_ids.end(),
            [&](const std::string& a, const std::string& b) {
              const std::string& ta = g.unit(a).text;
              const std::string& tb = g.unit(b).text;
              return ta != tb ? ta < tb : a < b;
            });
}

std::string concat_units(const std::vector<std::string>& unit_ids,
                         const MultipartiteGraph& g) {
  std::string out;
  for (const auto& id : unit_ids) {
    if (!out.empty()) {
      out.push_back(' ');
    }
    out += g.unit(id).text;
  }
  return out;
}

Embedding subtract(const Embedding& a, const Embedding& b) {
  Embedding out = a;
  subtract_in_place(out, b);
  return out;
}

void check_dim(const Embedding& vec, const GraphIndex& index) {
  if (vec.size() != index.units.dim()) {
    throw ParseError("embedding provider dimension " + std::to_string(vec.size()) +
                     " does not match index dimension " +
                     std::to_string(index.units.dim()));
  }
}

struct Candidate {
  BeamState state;
  std::string chosen_unit;
};

// Successor states of `state` without scores; deterministic order (frontier
// ascending, then similarity rank).
std::vector<Candidate> generate_successors(const BeamState& state, const GraphIndex& index,
                                           std::size_t k) {
  const MultipartiteGraph& g = index.graph;
  const std::set<std::string> collected(state.units.begin(), state.units.end());

  std::vector<Candidate> out;
  for (const auto& entity_id : state.frontier) {
    std::vector<std::string> fresh;
    for (const auto& unit_id : g.units_of_entity(entity_id)) {
      if (collected.count(unit_id) == 0) {
        fresh.push_back(unit_id);
      }
    }
    if (fresh.empty()) {
      continue;
    }
    for (const auto& hit : index.units.top_k(state.residual_query, k, &fresh)) {
      Candidate cand;
      cand.chosen_unit = hit.id;
      cand.state.residual_query = subtract(state.residual_query, index.units.vector_of(hit.id));
      cand.state.units = state.units;
      cand.state.units.push_back(hit.id);
      canonical_sort(cand.state.units, g);
      const auto& entities = g.entities_of_unit(hit.id);
      cand.state.frontier.assign(entities.begin(), entities.end());
      out.push_back(std::move(cand));
    }
  }
  return out;
}

std::vector<double> score_passages(Reranker& reranker, const std::string& query,
                                   const std::vector<std::string>& passages) {
  std::vector<double> scores = reranker.rerank(query, passages);
  if (scores.size() != passages.size()) {
    throw ProviderError("re-ranker returned " + std::to_string(scores.size()) +
                        " scores for " + std::to_string(passages.size()) + " passages");
  }
  return scores;
}

[[noreturn]] void abort_retrieval(const std::string& where, const std::exception& cause) {
  throw ProviderError("retrieval aborted during " + where + ": " + cause.what());
}

}  // namespace

std::string trace_to_jsonl(const std::vector<TraceEvent>& trace) {
  std::string out;
  for (const auto& e : trace) {
    const nlohmann::json j{{"depth", e.depth},
                           {"frontier", e.frontier},
                           {"chosen_unit", e.chosen_unit},
                           {"score", e.score},
                           {"pruned", e.pruned}};
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<std::string> entity_anchoring(const std::string& query,
                                          const Embedding& query_vec,
                                          const GraphIndex& index, Embedder& embedder,
                                          std::size_t k,
                                          const QueryEntityExtractor& extractor) {
  if (k < 1) {
    throw ParseError("anchoring requires k >= 1");
  }
  std::set<std::string> anchors;

  const std::vector<std::string> mentions = extractor.extract(query);
  if (!mentions.empty() && index.entities.size() > 0) {
    const std::vector<Embedding> vecs = embedder.embed(mentions);
    if (vecs.size() != mentions.size()) {
      throw ProviderError("embedder returned " + std::to_string(vecs.size()) +
                          " vectors for " + std::to_string(mentions.size()) + " mentions");
    }
    for (const auto& vec : vecs) {
      check_dim(vec, index);
      for (const auto& hit : index.entities.top_k(vec, k)) {
        anchors.insert(hit.id);
      }
    }
  }

  if (index.units.size() > 0) {
    check_dim(query_vec, index);
    for (const auto& hit : index.units.top_k(query_vec, k)) {
      for (const auto& entity_id : index.graph.entities_of_unit(hit.id)) {
        anchors.insert(entity_id);
      }
    }
  }
  return {anchors.begin(), anchors.end()};
}

std::vector<BeamState> expand_state(const BeamState& state, const GraphIndex& index,
                                    Reranker& reranker, const std::string& query,
                                    std::size_t k) {
  if (k < 1) {
    throw ParseError("expansion requires k >= 1");
  }
  std::vector<Candidate> candidates = generate_successors(state, index, k);
  std::vector<std::string> passages;
  passages.reserve(candidates.size());
  for (const auto& cand : candidates) {
    passages.push_back(concat_units(cand.state.units, index.graph));
  }
  const std::vector<double> scores = score_passages(reranker, query, passages);
  std::vector<BeamState> out;
  out.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    candidates[i].state.score = scores[i];
    out.push_back(std::move(candidates[i].state));
  }
  return out;
}

RetrievalResult q_iter(const std::string& query, const GraphIndex& index,
                       const RetrievalParams& params,
                       const RetrievalProviders& providers,
                       std::vector<TraceEvent>* trace_sink) {
  if (params.k < 1 || params.depth < 1 || params.beam < 1 || params.top_n < 1) {
    throw ParseError("retrieval parameters must all be >= 1");
  }
  if (providers.embedder == nullptr || providers.reranker == nullptr) {
    throw ParseError("retrieval requires embedding and re-rank providers");
  }
  const MultipartiteGraph& g = index.graph;

  RetrievalResult result;
  const auto record = [&](TraceEvent event) {
    if (trace_sink != nullptr) {
      trace_sink->push_back(event);
    }
    result.trace.push_back(std::move(event));
  };

  const NerQueryEntities default_extractor;
  const QueryEntityExtractor& extractor = providers.query_entities != nullptr
                                              ? *providers.query_entities
                                              : static_cast<const QueryEntityExtractor&>(
                                                    default_extractor);

  Embedding query_vec;
  try {
    std::vector<Embedding> rows = providers.embedder->embed({query});
    if (rows.size() != 1) {
      throw ProviderError("embedder returned " + std::to_string(rows.size()) +
                          " vectors for one query");
    }
    query_vec = std::move(rows.front());
    result.anchors = entity_anchoring(query, query_vec, index, *providers.embedder,
                                      params.k, extractor);
  } catch (const ProviderError& e) {
    abort_retrieval("entity anchoring", e);
  }

  if (result.anchors.empty()) {
    result.warnings.push_back("no anchor entities found for the query; nothing retrieved");
    return result;
  }

  std::vector<BeamState> queue(1);
  queue[0].frontier = result.anchors;
  queue[0].residual_query = query_vec;

  for (std::size_t depth = 1; depth <= params.depth; ++depth) {
    std::vector<Candidate> candidates;
    for (const auto& state : queue) {
      for (auto& cand : generate_successors(state, index, params.k)) {
        candidates.push_back(std::move(cand));
      }
    }
    if (candidates.empty()) {
      break;  // every frontier is exhausted
    }

    std::vector<std::string> passages;
    passages.reserve(candidates.size());
    for (const auto& cand : candidates) {
      passages.push_back(concat_units(cand.state.units, g));
    }
    std::vector<double> scores;
    try {
      scores = score_passages(*providers.reranker, query, passages);
    } catch (const ProviderError& e) {
      abort_retrieval("depth " + std::to_string(depth) + " re-ranking", e);
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      candidates[i].state.score = scores[i];
    }

    // Equal unit sets are one state; keep the best-scoring copy.
    std::map<std::vector<std::string>, std::size_t> best;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const auto [it, inserted] = best.emplace(candidates[i].state.units, i);
      if (!inserted && candidates[i].state.score > candidates[it->second].state.score) {
        it->second = i;
      }
    }
    std::vector<std::size_t> order;
    order.reserve(best.size());
    for (const auto& [units, idx] : best) {
      order.push_back(idx);
    }
    std::sort(order.begin(), order.end());  // back to generation order
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return candidates[a].state.score > candidates[b].state.score;
    });
    if (order.size() > params.beam) {
      order.resize(params.beam);
    }

    const std::set<std::size_t> survivor_idx(order.begin(), order.end());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      TraceEvent event;
      event.depth = depth;
      event.frontier = candidates[i].state.frontier;
      event.chosen_unit = candidates[i].chosen_unit;
      event.score = candidates[i].state.score;
      event.pruned = survivor_idx.count(i) == 0;
      record(std::move(event));
    }

    std::vector<BeamState> survivors;
    survivors.reserve(order.size());
    for (const std::size_t idx : order) {
      survivors.push_back(candidates[idx].state);
    }
    for (const auto& state : survivors) {
      result.collected.push_back(state);
    }
    queue = std::move(survivors);
  }

  std::set<std::string> chunk_ids;
  for (const auto& state : result.collected) {
    for (const auto& unit_id : state.units) {
      chunk_ids.insert(g.chunk_of_unit(unit_id));
    }
  }
  if (chunk_ids.empty()) {
    result.warnings.push_back("no units collected; nothing retrieved");
    return result;
  }

  const std::vector<std::string> ranked_ids(chunk_ids.begin(), chunk_ids.end());
  std::vector<std::string> chunk_texts;
  chunk_texts.reserve(ranked_ids.size());
  for (const auto& id : ranked_ids) {
    chunk_texts.push_back(g.chunk(id).text);
  }
  std::vector<double> chunk_scores;
  try {
    chunk_scores = score_passages(*providers.reranker, query, chunk_texts);
  } catch (const ProviderError& e) {
    abort_retrieval("final re-ranking", e);
  }
  for (std::size_t i = 0; i < ranked_ids.size(); ++i) {
    result.chunks.push_back({ranked_ids[i], chunk_scores[i]});
  }
  std::sort(result.chunks.begin(), result.chunks.end(),
            [](const ScoredId& a, const ScoredId& b) {
              return a.score != b.score ? a.score > b.score : a.id < b.id;
            });
  if (result.chunks.size() > params.top_n) {
    result.chunks.resize(params.top_n);
  }
  return result;
}

}  // namespace cluerag
