#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "cluerag/vector/embedding.hpp"

namespace cluerag {

struct ScoredId {
  std::string id;
  double score = 0.0;

  bool operator==(const ScoredId&) const = default;
};

// Immutable-after-build embedding collection with exact top-K retrieval.
// Rows live in one flat float array in insertion order, which is also the
// on-disk row order when an index is persisted.
class VectorSet {
 public:
  explicit VectorSet(std::size_t dim);

  // Rejects duplicate ids, wrong dimensions, and non-finite components.
  void add(const std::string& id, const Embedding& vec);

  std::size_t size() const { return ids_.size(); }
  std::size_t dim() const { return dim_; }
  bool contains(const std::string& id) const { return index_.count(id) != 0; }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::vector<float>& data() const { return data_; }

  // Copy of the stored vector; unknown id is an error.
  Embedding vector_of(const std::string& id) const;

  // Exact top-K by cosine, descending score with ties broken by ascending
  // id. With `candidates` the scan is restricted to those ids (duplicates
  // collapse, unknown ids are an error); empty candidates give an empty
  // result. Fewer than K rows in scope returns all of them.
  std::vector<ScoredId> top_k(const Embedding& query, std::size_t k,
                              const std::vector<std::string>* candidates = nullptr) const;

 private:
  std::size_t dim_;
  std::vector<std::string> ids_;
  std::vector<float> data_;  // row-major, ids_.size() x dim_
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace cluerag
