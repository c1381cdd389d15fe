#include "cluerag/corpus/corpus_io.hpp"

#include <unordered_set>

#include <json.hpp>

#include "cluerag/corpus/chunker.hpp"
#include "cluerag/error.hpp"
#include "cluerag/util/jsonl.hpp"
#include "cluerag/util/text.hpp"

namespace cluerag {

namespace {

using nlohmann::json;

json parse_record(const std::filesystem::path& path, std::size_t line_no,
                  const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ParseError(path.string() + ":" + std::to_string(line_no) + ": not a JSON object");
  }
  return j;
}

std::string require_string(const json& j, const char* key, const std::filesystem::path& path,
                           std::size_t line_no) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw ParseError(path.string() + ":" + std::to_string(line_no) + ": missing string field '" +
                     key + "'");
  }
  return j[key].get<std::string>();
}

}  // namespace

CorpusFormat parse_corpus_format(const std::string& name) {
  if (name == "jsonl-docs") return CorpusFormat::kJsonlDocs;
  if (name == "jsonl-chunks") return CorpusFormat::kJsonlChunks;
  throw ParseError("unknown corpus format '" + name + "' (expected jsonl-docs or jsonl-chunks)");
}

std::vector<Document> load_documents(const std::filesystem::path& path) {
  std::vector<Document> out;
  std::unordered_set<std::string> seen;
  for_each_jsonl_line(path, [&](std::size_t line_no, const std::string& line) {
    const json j = parse_record(path, line_no, line);
    Document d;
    d.id = require_string(j, "id", path, line_no);
    d.text = require_string(j, "text", path, line_no);
    if (j.contains("title")) {
      if (!j["title"].is_string()) {
        throw ParseError(path.string() + ":" + std::to_string(line_no) +
                         ": 'title' must be a string");
      }
      d.title = j["title"].get<std::string>();
    }
    if (trim(d.text).empty()) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": document '" + d.id +
                       "' has empty text");
    }
    if (!seen.insert(d.id).second) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": duplicate doc id '" +
                       d.id + "'");
    }
    out.push_back(std::move(d));
  });
  return out;
}

std::vector<Chunk> load_prechunked(const std::filesystem::path& path, const Tokenizer& tok) {
  std::vector<Chunk> out;
  std::unordered_set<std::string> seen;
  for_each_jsonl_line(path, [&](std::size_t line_no, const std::string& line) {
    const json j = parse_record(path, line_no, line);
    Chunk c;
    c.id = require_string(j, "id", path, line_no);
    c.doc_id = require_string(j, "doc_id", path, line_no);
    c.text = require_string(j, "text", path, line_no);
    if (trim(c.text).empty()) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": chunk '" + c.id +
                       "' has empty text");
    }
    if (!seen.insert(c.id).second) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": duplicate chunk id '" +
                       c.id + "'");
    }
    c.token_len = tok.count(c.text);
    out.push_back(std::move(c));
  });
  return out;
}

std::vector<Chunk> load_corpus(const std::filesystem::path& path, CorpusFormat format,
                               std::size_t cap, const Tokenizer& tok) {
  if (format == CorpusFormat::kJsonlChunks) {
    return load_prechunked(path, tok);
  }
  std::vector<Chunk> out;
  std::unordered_set<std::string> chunk_ids;
  for (const Document& doc : load_documents(path)) {
    for (Chunk& c : chunk_document(doc, cap, tok)) {
      if (!chunk_ids.insert(c.id).second) {
        throw ParseError("chunk id collision '" + c.id + "' (doc ids containing '#'?)");
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace cluerag
