#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cluerag/corpus/chunker.hpp"
#include "cluerag/corpus/types.hpp"
#include "cluerag/extraction/ner.hpp"
#include "cluerag/extraction/unit_extraction.hpp"
#include "cluerag/graph/graph.hpp"
#include "cluerag/providers/provider.hpp"
#include "cluerag/selection/chunk_selection.hpp"
#include "cluerag/vector/vector_set.hpp"

namespace cluerag {

struct IndexConfig {
  double alpha = 1.0;                 // token budget coefficient for the core subset
  std::size_t chunk_cap = kDefaultChunkCap;  // max tokens per chunk
  SelectionMetric selection_metric = SelectionMetric::kBleu;
  SolverMode solver = SolverMode::kAuto;
  std::size_t embedding_dim = 0;  // 0 = take the provider's dimension
  std::size_t completion_max_tokens = 2048;
  std::size_t threads = 4;
  std::size_t embed_batch_size = 64;
};

struct IndexProviders {
  LlmClient* llm = nullptr;  // required unless alpha selects nothing
  Embedder* embedder = nullptr;
  const Ner* ner = nullptr;  // nullptr selects default_ner()
};

// The full index artifact: graph structure plus unit and entity embeddings.
// Entity vectors embed the normalized form, unit vectors the unit text.
struct GraphIndex {
  explicit GraphIndex(std::size_t dim) : units(dim), entities(dim) {}

  MultipartiteGraph graph;
  VectorSet units;
  VectorSet entities;
};

struct BuildResult {
  GraphIndex index;
  SelectionReport selection;
  std::vector<ExtractionLogEntry> extraction_log;
  std::vector<std::string> warnings;
};

// Chunks every document, scores chunks against the token budget, routes
// core chunks through the LLM and the rest through sentence splitting,
// assembles the graph, and embeds all units and entities. Provider
// hard-failures abort; the thrown error names the phase that died and how
// far the build got.
BuildResult build_index(const std::vector<Document>& docs, const IndexConfig& cfg,
                        const IndexProviders& providers);

// Same pipeline for corpora that arrive pre-chunked.
BuildResult build_index_from_chunks(const std::vector<Chunk>& chunks, const IndexConfig& cfg,
                                    const IndexProviders& providers);

}  // namespace cluerag
