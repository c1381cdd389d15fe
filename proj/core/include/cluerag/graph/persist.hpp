#pragma once

#include <filesystem>

#include "cluerag/graph/build.hpp"

namespace cluerag {

inline constexpr int kIndexFormatVersion = 1;

// Writes the index directory: chunks.jsonl, units.jsonl, entities.jsonl
// (id-sorted rows), edges_c.bin and edges_e.bin (little-endian u32 row-pair
// records over the sorted orders), embeddings.f32 (unit rows then entity
// rows, row-major little-endian floats), and manifest.json with the format
// version, dimension, counts, and per-file checksums. The layout is
// canonical: persisting a loaded index reproduces the bytes exactly.
void persist_index(const GraphIndex& index, const std::filesystem::path& dir);

// Verifies the manifest version, every checksum, and all cross-file
// consistency, then rebuilds the graph and vector sets. The result passes
// MultipartiteGraph::validate() or the load throws.
GraphIndex load_index(const std::filesystem::path& dir);

}  // namespace cluerag
