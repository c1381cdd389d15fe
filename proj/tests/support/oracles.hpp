#pragma once

// Reference implementations used to validate the library. Written straight
// from first principles and kept intentionally naive; do not "optimize" them
// to match the library's structure.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cluerag::testing {

// Multi-reference BLEU from the definition: clipped modified n-gram
// precision per order, geometric mean over orders the candidate can form,
// brevity penalty against the closest reference length (ties prefer the
// shorter reference). Zero-match precisions become `eps`.
inline double oracle_bleu(const std::vector<std::string>& cand,
                          const std::vector<std::vector<std::string>>& refs, int max_order,
                          double eps) {
  const std::size_t c = cand.size();
  if (c == 0 || refs.empty()) {
    return 0.0;
  }
  double log_sum = 0.0;
  int orders_used = 0;
  for (int n = 1; n <= max_order; ++n) {
    if (c < static_cast<std::size_t>(n)) {
      continue;
    }
    std::map<std::vector<std::string>, std::int64_t> cand_counts;
    for (std::size_t i = 0; i + n <= c; ++i) {
      cand_counts[{cand.begin() + static_cast<std::ptrdiff_t>(i),
                   cand.begin() + static_cast<std::ptrdiff_t>(i + n)}] += 1;
    }
    std::map<std::vector<std::string>, std::int64_t> max_ref_counts;
    for (const auto& ref : refs) {
      std::map<std::vector<std::string>, std::int64_t> rc;
      for (std::size_t i = 0; i + n <= ref.size(); ++i) {
        rc[{ref.begin() + static_cast<std::ptrdiff_t>(i),
            ref.begin() + static_cast<std::ptrdiff_t>(i + n)}] += 1;
      }
      for (const auto& [gram, cnt] : rc) {
        auto it = max_ref_counts.find(gram);
        if (it == max_ref_counts.end()) {
          max_ref_counts[gram] = cnt;
        } else {
          it->second = std::max(it->second, cnt);
        }
      }
    }
    std::int64_t matched = 0;
    std::int64_t total = 0;
    for (const auto& [gram, cnt] : cand_counts) {
      total += cnt;
      auto it = max_ref_counts.find(gram);
      if (it != max_ref_counts.end()) {
        matched += std::min(cnt, it->second);
      }
    }
    const double p = matched > 0 ? static_cast<double>(matched) / static_cast<double>(total) : eps;
    log_sum += std::log(p);
    ++orders_used;
  }
  if (orders_used == 0) {
    return 0.0;
  }
  std::size_t r = refs.front().size();
  for (const auto& ref : refs) {
    const auto dist = [&](std::size_t len) {
      return len > c ? len - c : c - len;
    };
    if (dist(ref.size()) < dist(r) || (dist(ref.size()) == dist(r) && ref.size() < r)) {
      r = ref.size();
    }
  }
  const double bp = c >= r ? 1.0
                           : std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));
  return bp * std::exp(log_sum / orders_used);
}

// Exhaustive 0-1 knapsack over all 2^n subsets; n must stay small (<= ~22).
// Subset weight and value are built up from the subset minus its lowest set
// bit, so the scan stays O(2^n). Returns the maximum total value.
inline std::int64_t oracle_knapsack_best(const std::vector<std::size_t>& weights,
                                         const std::vector<std::int64_t>& values,
                                         std::size_t budget) {
  const std::size_t n = weights.size();
  const std::uint64_t total = 1ull << n;
  std::vector<std::uint64_t> subset_w(total, 0);
  std::vector<std::int64_t> subset_v(total, 0);
  std::int64_t best = 0;
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    const std::uint64_t low = mask & (~mask + 1);
    const int i = std::countr_zero(low);
    subset_w[mask] = subset_w[mask ^ low] + weights[static_cast<std::size_t>(i)];
    subset_v[mask] = subset_v[mask ^ low] + values[static_cast<std::size_t>(i)];
    if (subset_w[mask] <= budget) {
      best = std::max(best, subset_v[mask]);
    }
  }
  return best;
}

}  // namespace cluerag::testing
