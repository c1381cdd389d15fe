#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cluerag/corpus/tokenizer.hpp"
#include "cluerag/corpus/types.hpp"

namespace cluerag {

enum class CorpusFormat {
  kJsonlDocs,    // {"id", "title"?, "text"} per line; chunked on ingest
  kJsonlChunks,  // {"id", "doc_id", "text"} per line; used verbatim
};

CorpusFormat parse_corpus_format(const std::string& name);

// Reads a jsonl-docs file. Throws IoError for a missing file and ParseError
// (with the line number) for malformed records, duplicate ids, or documents
// whose text is empty after trimming.
std::vector<Document> load_documents(const std::filesystem::path& path);

// Reads a jsonl-chunks file. Chunk token lengths are computed with `tok`;
// the chunk cap is intentionally not enforced on pre-chunked input.
std::vector<Chunk> load_prechunked(const std::filesystem::path& path,
                                   const Tokenizer& tok = default_tokenizer());

// Ingests either format into a flat chunk list, chunking documents at `cap`
// when the format requires it.
std::vector<Chunk> load_corpus(const std::filesystem::path& path, CorpusFormat format,
                               std::size_t cap, const Tokenizer& tok = default_tokenizer());

}  // namespace cluerag
