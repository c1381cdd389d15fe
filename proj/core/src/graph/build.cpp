#include "cluerag/graph/build.hpp"

#include <unordered_map>
#include <unordered_set>

#include "cluerag/error.hpp"
#include "cluerag/vector/embed_batch.hpp"

namespace cluerag {

namespace {

[[noreturn]] void abort_build(const char* phase, const MultipartiteGraph& g,
                              const std::exception& cause) {
  throw ProviderError(std::string("index build aborted during ") + phase + " (" +
                      std::to_string(g.chunk_count()) + " chunks, " +
                      std::to_string(g.unit_count()) + " units assembled): " + cause.what());
}

}  // namespace

BuildResult build_index(const std::vector<Document>& docs, const IndexConfig& cfg,
                        const IndexProviders& providers) {
  if (docs.empty()) {
    throw ParseError("cannot build an index from an empty corpus");
  }
  std::vector<Chunk> chunks;
  for (const auto& doc : docs) {
    for (auto& chunk : chunk_document(doc, cfg.chunk_cap)) {
      chunks.push_back(std::move(chunk));
    }
  }
  return build_index_from_chunks(chunks, cfg, providers);
}

BuildResult build_index_from_chunks(const std::vector<Chunk>& chunks, const IndexConfig& cfg,
                                    const IndexProviders& providers) {
  if (chunks.empty()) {
    throw ParseError("cannot build an index from an empty corpus");
  }
  if (providers.embedder == nullptr) {
    throw ParseError("index build requires an embedding provider");
  }

  EmbedBatchOptions embed_opts;
  embed_opts.batch_size = cfg.embed_batch_size;
  embed_opts.threads = static_cast<int>(cfg.threads);

  MultipartiteGraph graph;
  for (const auto& chunk : chunks) {
    graph.add_chunk(chunk);
  }

  SelectionOptions sel_opts;
  sel_opts.metric = cfg.selection_metric;
  sel_opts.solver = cfg.solver;
  sel_opts.threads = cfg.threads;
  sel_opts.embed = [&](const std::vector<std::string>& texts) {
    return embed_batch(*providers.embedder, texts, embed_opts);
  };
  SelectionResult selection;
  try {
    selection = chunk_selection(chunks, cfg.alpha, sel_opts);
  } catch (const ProviderError& e) {
    abort_build("chunk scoring", graph, e);
  }

  ExtractionOptions ex_opts;
  ex_opts.llm = providers.llm;
  ex_opts.ner = providers.ner;
  ex_opts.completion_max_tokens = cfg.completion_max_tokens;
  ex_opts.threads = cfg.threads;
  const std::unordered_set<std::string> core(selection.selected_ids.begin(),
                                             selection.selected_ids.end());
  HybridExtraction extraction;
  try {
    extraction = hybrid_extract(chunks, core, ex_opts);
  } catch (const ProviderError& e) {
    abort_build("unit extraction", graph, e);
  }

  for (const auto& unit : extraction.units) {
    graph.add_unit(unit);
  }
  std::unordered_map<std::string, const Entity*> entity_by_id;
  for (const auto& entity : extraction.entities) {
    entity_by_id.emplace(entity.entity_id, &entity);
  }
  for (const auto& [entity_id, unit_id] : extraction.links) {
    graph.link_entity(*entity_by_id.at(entity_id), unit_id);
  }

  std::vector<std::string> unit_texts;
  unit_texts.reserve(extraction.units.size());
  for (const auto& unit : extraction.units) {
    unit_texts.push_back(unit.text);
  }
  std::vector<std::string> entity_texts;
  entity_texts.reserve(extraction.entities.size());
  for (const auto& entity : extraction.entities) {
    entity_texts.push_back(entity.normalized);
  }
  std::vector<Embedding> unit_rows;
  std::vector<Embedding> entity_rows;
  try {
    unit_rows = embed_batch(*providers.embedder, unit_texts, embed_opts);
    entity_rows = embed_batch(*providers.embedder, entity_texts, embed_opts);
  } catch (const ProviderError& e) {
    abort_build("embedding", graph, e);
  }

  std::size_t dim = cfg.embedding_dim;
  if (dim == 0) {
    dim = providers.embedder->dim();
  }
  if (dim == 0 && !unit_rows.empty()) {
    dim = unit_rows.front().size();
  }
  if (dim == 0) {
    throw ParseError("embedding dimension is unknown; set embedding_dim");
  }

  BuildResult result{GraphIndex(dim), std::move(selection.report),
                     std::move(extraction.log), {}};
  result.index.graph = std::move(graph);
  for (std::size_t i = 0; i < extraction.units.size(); ++i) {
    result.index.units.add(extraction.units[i].unit_id, unit_rows[i]);
  }
  for (std::size_t i = 0; i < extraction.entities.size(); ++i) {
    result.index.entities.add(extraction.entities[i].entity_id, entity_rows[i]);
  }

  result.warnings = result.selection.warnings;  // report keeps its own copy
  for (auto& w : extraction.warnings) {
    result.warnings.push_back(std::move(w));
  }
  result.index.graph.validate();
  return result;
}

}  // namespace cluerag
