#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cluerag/corpus/tokenizer.hpp"
#include "cluerag/corpus/types.hpp"

namespace cluerag {

enum class BleuSmoothing {
  kNone,        // any zero-match order collapses the score to 0
  kAddEpsilon,  // zero-match precisions are replaced by epsilon
};

struct BleuOptions {
  int max_order = 4;
  BleuSmoothing smoothing = BleuSmoothing::kAddEpsilon;
  double epsilon = 1e-9;
};

// Multi-reference BLEU: geometric mean of clipped modified n-gram
// precisions times a brevity penalty against the closest reference length
// (ties prefer the shorter reference). Orders the candidate is too short to
// form are dropped from the mean, so a short exact match still scores 1.0.
// Empty candidate scores 0.0; an empty reference list is an error.
double bleu_score(std::string_view candidate, const std::vector<std::string>& references,
                  const BleuOptions& opts = {}, const Tokenizer& tok = default_tokenizer());

// v_i = bleu_score(chunk i, every other chunk as a reference). Backed by a
// corpus-wide n-gram occurrence index that tracks, per n-gram, the two
// highest per-chunk counts and who holds the top one; the max over
// references excluding chunk i falls out of that pair. Produces exactly the
// numbers the pairwise definition gives. A single chunk scores {0.0}.
std::vector<double> corpus_bleu_scores(const std::vector<Chunk>& chunks,
                                       const BleuOptions& opts = {},
                                       const Tokenizer& tok = default_tokenizer(),
                                       std::size_t threads = 0);

}  // namespace cluerag
