#include "cluerag/graph/persist.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <unordered_map>

#include <json.hpp>

#include "cluerag/error.hpp"
#include "cluerag/util/hash.hpp"
#include "cluerag/util/jsonl.hpp"

static_assert(std::endian::native == std::endian::little,
              "index files are little-endian; big-endian hosts need byte swaps");

namespace cluerag {

namespace {

constexpr const char* kChunksFile = "chunks.jsonl";
constexpr const char* kUnitsFile = "units.jsonl";
constexpr const char* kEntitiesFile = "entities.jsonl";
constexpr const char* kEdgesCFile = "edges_c.bin";
constexpr const char* kEdgesEFile = "edges_e.bin";
constexpr const char* kEmbeddingsFile = "embeddings.f32";
constexpr const char* kManifestFile = "manifest.json";

std::string checksum_hex(std::string_view bytes) {
  const std::uint64_t h = fnv1a64(bytes);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void put_u32(std::string& out, std::uint32_t v) {
  char bytes[4];
  std::memcpy(bytes, &v, 4);
  out.append(bytes, 4);
}

std::uint32_t get_u32(std::string_view bytes, std::size_t offset) {
  std::uint32_t v = 0;
  std::memcpy(&v, bytes.data() + offset, 4);
  return v;
}

std::uint32_t row_of(const std::unordered_map<std::string, std::uint32_t>& rows,
                     const std::string& id, const char* what) {
  const auto it = rows.find(id);
  if (it == rows.end()) {
    throw InvariantError(std::string("no row for ") + what + " '" + id + "'");
  }
  return it->second;
}

const nlohmann::json& require(const nlohmann::json& j, const char* key, const char* where) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(std::string(where) + " is missing key '" + key + "'");
  }
  return *it;
}

}  // namespace

void persist_index(const GraphIndex& index, const std::filesystem::path& dir) {
  const MultipartiteGraph& g = index.graph;
  if (g.unit_count() > UINT32_MAX || g.chunk_count() > UINT32_MAX ||
      g.entity_count() > UINT32_MAX) {
    throw InvariantError("index too large for u32 edge records");
  }
  std::filesystem::create_directories(dir);

  // Node maps iterate in id order; that order defines the dense rows.
  std::unordered_map<std::string, std::uint32_t> chunk_rows;
  std::unordered_map<std::string, std::uint32_t> unit_rows;
  std::unordered_map<std::string, std::uint32_t> entity_rows;

  std::string chunks_text;
  for (const auto& [id, chunk] : g.chunks()) {
    chunk_rows.emplace(id, static_cast<std::uint32_t>(chunk_rows.size()));
    const nlohmann::json j{{"id", chunk.id},
                           {"doc_id", chunk.doc_id},
                           {"text", chunk.text},
                           {"token_len", chunk.token_len}};
    chunks_text += j.dump();
    chunks_text.push_back('\n');
  }

  std::string units_text;
  std::string edges_c;
  for (const auto& [id, unit] : g.units()) {
    unit_rows.emplace(id, static_cast<std::uint32_t>(unit_rows.size()));
    const nlohmann::json j{{"unit_id", unit.unit_id},
                           {"chunk_id", unit.chunk_id},
                           {"text", unit.text},
                           {"source", to_string(unit.source)}};
    units_text += j.dump();
    units_text.push_back('\n');
  }
  for (const auto& [id, unit] : g.units()) {
    put_u32(edges_c, row_of(chunk_rows, unit.chunk_id, "chunk"));
    put_u32(edges_c, row_of(unit_rows, id, "unit"));
  }

  std::string entities_text;
  for (const auto& [id, entity] : g.entities()) {
    entity_rows.emplace(id, static_cast<std::uint32_t>(entity_rows.size()));
    const nlohmann::json j{{"entity_id", entity.entity_id},
                           {"surface", entity.surface},
                           {"normalized", entity.normalized}};
    entities_text += j.dump();
    entities_text.push_back('\n');
  }

  std::string edges_e;
  for (const auto& [entity_id, unit_id] : g.entity_edges()) {
    put_u32(edges_e, row_of(entity_rows, entity_id, "entity"));
    put_u32(edges_e, row_of(unit_rows, unit_id, "unit"));
  }

  std::string embeddings;
  embeddings.reserve((g.unit_count() + g.entity_count()) * index.units.dim() * 4);
  const auto append_row = [&embeddings](const Embedding& row) {
    const std::size_t at = embeddings.size();
    embeddings.resize(at + row.size() * 4);
    std::memcpy(embeddings.data() + at, row.data(), row.size() * 4);
  };
  for (const auto& [id, unit] : g.units()) {
    append_row(index.units.vector_of(id));
  }
  for (const auto& [id, entity] : g.entities()) {
    append_row(index.entities.vector_of(id));
  }

  nlohmann::json manifest;
  manifest["format_version"] = kIndexFormatVersion;
  manifest["embedding_dim"] = index.units.dim();
  manifest["counts"] = {{"chunks", g.chunk_count()},
                        {"units", g.unit_count()},
                        {"entities", g.entity_count()},
                        {"edges_c", g.unit_count()},
                        {"edges_e", g.entity_edge_count()}};
  manifest["checksums"] = {{kChunksFile, checksum_hex(chunks_text)},
                           {kUnitsFile, checksum_hex(units_text)},
                           {kEntitiesFile, checksum_hex(entities_text)},
                           {kEdgesCFile, checksum_hex(edges_c)},
                           {kEdgesEFile, checksum_hex(edges_e)},
                           {kEmbeddingsFile, checksum_hex(embeddings)}};

  write_file(dir / kChunksFile, chunks_text);
  write_file(dir / kUnitsFile, units_text);
  write_file(dir / kEntitiesFile, entities_text);
  write_file(dir / kEdgesCFile, edges_c);
  write_file(dir / kEdgesEFile, edges_e);
  write_file(dir / kEmbeddingsFile, embeddings);
  write_file(dir / kManifestFile, manifest.dump(2) + "\n");
}

GraphIndex load_index(const std::filesystem::path& dir) {
  const nlohmann::json manifest =
      nlohmann::json::parse(read_file(dir / kManifestFile), nullptr, false);
  if (manifest.is_discarded() || !manifest.is_object()) {
    throw ParseError("manifest.json is not a JSON object");
  }
  const int version = require(manifest, "format_version", "manifest.json").get<int>();
  if (version != kIndexFormatVersion) {
    throw IoError("unsupported index format_version " + std::to_string(version) +
                  ", expected " + std::to_string(kIndexFormatVersion));
  }
  const std::size_t dim = require(manifest, "embedding_dim", "manifest.json").get<std::size_t>();
  if (dim < 1) {
    throw ParseError("manifest.json embedding_dim must be >= 1");
  }
  const auto& checksums = require(manifest, "checksums", "manifest.json");
  const auto& counts = require(manifest, "counts", "manifest.json");

  std::unordered_map<std::string, std::string> files;
  for (const char* name :
       {kChunksFile, kUnitsFile, kEntitiesFile, kEdgesCFile, kEdgesEFile, kEmbeddingsFile}) {
    std::string bytes = read_file(dir / name);
    const std::string expected = require(checksums, name, "manifest.json checksums");
    if (checksum_hex(bytes) != expected) {
      throw IoError(std::string("checksum mismatch for ") + name);
    }
    files.emplace(name, std::move(bytes));
  }

  GraphIndex index(dim);
  MultipartiteGraph& g = index.graph;

  std::vector<std::string> chunk_ids;
  for_each_jsonl_text(files[kChunksFile], kChunksFile,
                      [&](std::size_t, std::string_view line) {
                        const auto j = nlohmann::json::parse(line);
                        Chunk chunk;
                        chunk.id = require(j, "id", kChunksFile).get<std::string>();
                        chunk.doc_id = require(j, "doc_id", kChunksFile).get<std::string>();
                        chunk.text = require(j, "text", kChunksFile).get<std::string>();
                        chunk.token_len =
                            require(j, "token_len", kChunksFile).get<std::size_t>();
                        g.add_chunk(chunk);
                        chunk_ids.push_back(chunk.id);
                      });

  std::vector<std::string> unit_ids;
  for_each_jsonl_text(files[kUnitsFile], kUnitsFile,
                      [&](std::size_t, std::string_view line) {
                        const auto j = nlohmann::json::parse(line);
                        KnowledgeUnit unit;
                        unit.unit_id = require(j, "unit_id", kUnitsFile).get<std::string>();
                        unit.chunk_id = require(j, "chunk_id", kUnitsFile).get<std::string>();
                        unit.text = require(j, "text", kUnitsFile).get<std::string>();
                        const std::string source =
                            require(j, "source", kUnitsFile).get<std::string>();
                        if (source == "llm") {
                          unit.source = UnitSource::kLlm;
                        } else if (source == "nlp") {
                          unit.source = UnitSource::kNlp;
                        } else {
                          throw ParseError("unit '" + unit.unit_id +
                                           "' has unknown source '" + source + "'");
                        }
                        g.add_unit(unit);
                        unit_ids.push_back(unit.unit_id);
                      });

  std::vector<Entity> entities;
  for_each_jsonl_text(files[kEntitiesFile], kEntitiesFile,
                      [&](std::size_t, std::string_view line) {
                        const auto j = nlohmann::json::parse(line);
                        Entity e;
                        e.entity_id = require(j, "entity_id", kEntitiesFile).get<std::string>();
                        e.surface = require(j, "surface", kEntitiesFile).get<std::string>();
                        e.normalized =
                            require(j, "normalized", kEntitiesFile).get<std::string>();
                        entities.push_back(std::move(e));
                      });

  const auto expect_count = [&](const char* key, std::size_t actual) {
    const std::size_t recorded = require(counts, key, "manifest.json counts").get<std::size_t>();
    if (recorded != actual) {
      throw IoError(std::string("manifest count mismatch for ") + key + ": recorded " +
                    std::to_string(recorded) + ", found " + std::to_string(actual));
    }
  };
  expect_count("chunks", chunk_ids.size());
  expect_count("units", unit_ids.size());
  expect_count("entities", entities.size());

  const std::string& edges_c = files[kEdgesCFile];
  if (edges_c.size() != unit_ids.size() * 8) {
    throw IoError("edges_c.bin has unexpected size");
  }
  for (std::size_t i = 0; i < unit_ids.size(); ++i) {
    const std::uint32_t chunk_row = get_u32(edges_c, i * 8);
    const std::uint32_t unit_row = get_u32(edges_c, i * 8 + 4);
    if (chunk_row >= chunk_ids.size() || unit_row >= unit_ids.size()) {
      throw IoError("edges_c.bin row index out of range");
    }
    if (g.unit(unit_ids[unit_row]).chunk_id != chunk_ids[chunk_row]) {
      throw IoError("edges_c.bin contradicts units.jsonl parentage");
    }
  }

  const std::string& edges_e = files[kEdgesEFile];
  if (edges_e.size() % 8 != 0) {
    throw IoError("edges_e.bin has unexpected size");
  }
  expect_count("edges_c", unit_ids.size());
  expect_count("edges_e", edges_e.size() / 8);
  for (std::size_t i = 0; i < edges_e.size(); i += 8) {
    const std::uint32_t entity_row = get_u32(edges_e, i);
    const std::uint32_t unit_row = get_u32(edges_e, i + 4);
    if (entity_row >= entities.size() || unit_row >= unit_ids.size()) {
      throw IoError("edges_e.bin row index out of range");
    }
    g.link_entity(entities[entity_row], unit_ids[unit_row]);
  }
  if (g.entity_count() != entities.size()) {
    throw IoError("entities.jsonl lists entities that no edge references");
  }

  const std::string& embeddings = files[kEmbeddingsFile];
  const std::size_t rows = unit_ids.size() + entities.size();
  if (embeddings.size() != rows * dim * 4) {
    throw IoError("embeddings.f32 has unexpected size");
  }
  const auto read_row = [&](std::size_t row) {
    Embedding v(dim);
    std::memcpy(v.data(), embeddings.data() + row * dim * 4, dim * 4);
    return v;
  };
  for (std::size_t i = 0; i < unit_ids.size(); ++i) {
    index.units.add(unit_ids[i], read_row(i));
  }
  for (std::size_t i = 0; i < entities.size(); ++i) {
    index.entities.add(entities[i].entity_id, read_row(unit_ids.size() + i));
  }

  g.validate();
  return index;
}

}  // namespace cluerag
