#pragma once

#include <string>
#include <vector>

namespace cluerag {

struct MetricOptions {
  // Drop {a, an, the} from both sides before comparing. Off by default so
  // token counts match the documented worked examples exactly.
  bool drop_articles = false;
};

// Lowercases, deletes ASCII punctuation, collapses whitespace runs to one
// space, trims, and optionally drops article tokens.
std::string normalize_answer(const std::string& text, const MetricOptions& opts = {});

// 1 when any normalized golden answer occurs in the normalized generation
// as a contiguous whole-token run, else 0. A gold that normalizes to
// nothing counts only against a generation that also normalizes to nothing.
int accuracy(const std::vector<std::string>& gold, const std::string& generated,
             const MetricOptions& opts = {});

// Max over golden answers of bag-of-tokens F1: multiset overlap, precision
// overlap/|generated tokens|, recall overlap/|gold tokens|. Both sides
// empty after normalization scores 1.0, exactly one side empty 0.0.
double f1(const std::vector<std::string>& gold, const std::string& generated,
          const MetricOptions& opts = {});

}  // namespace cluerag
