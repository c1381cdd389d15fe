#include "cluerag/vector/vector_set.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "cluerag/error.hpp"

namespace cluerag {

VectorSet::VectorSet(std::size_t dim) : dim_(dim) {
  if (dim < 1) {
    throw ParseError("vector set dimension must be >= 1");
  }
}

void VectorSet::add(const std::string& id, const Embedding& vec) {
  if (vec.size() != dim_) {
    throw ParseError("vector for '" + id + "' has dimension " + std::to_string(vec.size()) +
                     ", store expects " + std::to_string(dim_));
  }
  for (const float x : vec) {
    if (!std::isfinite(x)) {
      throw ParseError("vector for '" + id + "' has a non-finite component");
    }
  }
  if (!index_.emplace(id, ids_.size()).second) {
    throw ParseError("duplicate vector id '" + id + "'");
  }
  ids_.push_back(id);
  data_.insert(data_.end(), vec.begin(), vec.end());
}

Embedding VectorSet::vector_of(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) {
    throw InvariantError("unknown vector id '" + id + "'");
  }
  const float* row = data_.data() + it->second * dim_;
  return Embedding(row, row + dim_);
}

std::vector<ScoredId> VectorSet::top_k(const Embedding& query, std::size_t k,
                                       const std::vector<std::string>* candidates) const {
  if (k < 1) {
    throw ParseError("top_k requires k >= 1");
  }
  if (query.size() != dim_) {
    throw InvariantError("query dimension " + std::to_string(query.size()) +
                         " does not match store dimension " + std::to_string(dim_));
  }
  const auto score_row = [&](std::size_t row) {
    return cosine_similarity(query.data(), data_.data() + row * dim_, dim_);
  };

  std::vector<ScoredId> scored;
  if (candidates != nullptr) {
    scored.reserve(candidates->size());
    std::unordered_set<std::string> seen;
    for (const auto& id : *candidates) {
      if (!seen.insert(id).second) {
        continue;
      }
      const auto it = index_.find(id);
      if (it == index_.end()) {
        throw InvariantError("unknown id '" + id + "' in candidate set");
      }
      scored.push_back({id, score_row(it->second)});
    }
  } else {
    scored.reserve(ids_.size());
    for (std::size_t row = 0; row < ids_.size(); ++row) {
      scored.push_back({ids_[row], score_row(row)});
    }
  }

  std::sort(scored.begin(), scored.end(), [](const ScoredId& a, const ScoredId& b) {
    if (a.score != b.score) {
      return a.score > b.score;
    }
    return a.id < b.id;
  });
  if (scored.size() > k) {
    scored.resize(k);
  }
  return scored;
}

}  // namespace cluerag
