#include "cluerag/selection/bleu.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "cluerag/error.hpp"
#include "cluerag/util/parallel.hpp"

namespace cluerag {

namespace {

// N-grams are keyed by their tokens joined with an unlikely separator byte;
// exact keys keep the accelerated path free of hash-collision drift.
constexpr char kSep = '\x1f';

using GramCounts = std::unordered_map<std::string, std::int64_t>;

GramCounts gram_counts(const std::vector<std::string>& tokens, int n) {
  GramCounts out;
  if (tokens.size() < static_cast<std::size_t>(n)) {
    return out;
  }
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int k = 1; k < n; ++k) {
      key.push_back(kSep);
      key += tokens[i + static_cast<std::size_t>(k)];
    }
    out[std::move(key)] += 1;
  }
  return out;
}

double combine(const std::vector<std::pair<std::int64_t, std::int64_t>>& matched_total,
               std::size_t cand_len, const std::vector<std::size_t>& ref_lens,
               const BleuOptions& opts) {
  double log_sum = 0.0;
  int orders_used = 0;
  for (const auto& [matched, total] : matched_total) {
    if (total <= 0) {
      continue;
    }
    double p;
    if (matched > 0) {
      p = static_cast<double>(matched) / static_cast<double>(total);
    } else if (opts.smoothing == BleuSmoothing::kAddEpsilon) {
      p = opts.epsilon;
    } else {
      return 0.0;
    }
    log_sum += std::log(p);
    ++orders_used;
  }
  if (orders_used == 0) {
    return 0.0;
  }
  std::size_t r = ref_lens.front();
  for (const std::size_t len : ref_lens) {
    const auto dist = [&](std::size_t l) { return l > cand_len ? l - cand_len : cand_len - l; };
    if (dist(len) < dist(r) || (dist(len) == dist(r) && len < r)) {
      r = len;
    }
  }
  const double bp =
      cand_len >= r ? 1.0
                    : std::exp(1.0 - static_cast<double>(r) / static_cast<double>(cand_len));
  return bp * std::exp(log_sum / orders_used);
}

}  // namespace

double bleu_score(std::string_view candidate, const std::vector<std::string>& references,
                  const BleuOptions& opts, const Tokenizer& tok) {
  if (references.empty()) {
    throw ParseError("bleu_score requires at least one reference");
  }
  if (opts.max_order < 1) {
    throw ParseError("bleu max_order must be >= 1");
  }
  const std::vector<std::string> cand = token_texts(tok, candidate);
  if (cand.empty()) {
    return 0.0;
  }
  std::vector<std::vector<std::string>> refs;
  refs.reserve(references.size());
  std::vector<std::size_t> ref_lens;
  for (const auto& r : references) {
    refs.push_back(token_texts(tok, r));
    ref_lens.push_back(refs.back().size());
  }
  std::vector<std::pair<std::int64_t, std::int64_t>> matched_total;
  for (int n = 1; n <= opts.max_order; ++n) {
    const GramCounts cand_counts = gram_counts(cand, n);
    if (cand_counts.empty()) {
      matched_total.emplace_back(0, 0);
      continue;
    }
    GramCounts max_ref;
    for (const auto& ref : refs) {
      for (const auto& [gram, cnt] : gram_counts(ref, n)) {
        auto [it, inserted] = max_ref.try_emplace(gram, cnt);
        if (!inserted && cnt > it->second) {
          it->second = cnt;
        }
      }
    }
    std::int64_t matched = 0;
    std::int64_t total = 0;
    for (const auto& [gram, cnt] : cand_counts) {
      total += cnt;
      auto it = max_ref.find(gram);
      if (it != max_ref.end()) {
        matched += std::min(cnt, it->second);
      }
    }
    matched_total.emplace_back(matched, total);
  }
  return combine(matched_total, cand.size(), ref_lens, opts);
}

std::vector<double> corpus_bleu_scores(const std::vector<Chunk>& chunks, const BleuOptions& opts,
                                       const Tokenizer& tok, std::size_t threads) {
  const std::size_t n_chunks = chunks.size();
  if (n_chunks == 0) {
    return {};
  }
  if (n_chunks == 1) {
    return {0.0};
  }
  if (opts.max_order < 1) {
    throw ParseError("bleu max_order must be >= 1");
  }
  const int orders = opts.max_order;

  std::vector<std::vector<std::string>> tokens(n_chunks);
  parallel_for(n_chunks, threads,
               [&](std::size_t i) { tokens[i] = token_texts(tok, chunks[i].text); });

  // counts[i][n-1]: chunk i's n-gram multiset.
  std::vector<std::vector<GramCounts>> counts(n_chunks);
  parallel_for(n_chunks, threads, [&](std::size_t i) {
    counts[i].reserve(static_cast<std::size_t>(orders));
    for (int n = 1; n <= orders; ++n) {
      counts[i].push_back(gram_counts(tokens[i], n));
    }
  });

  // Per n-gram, the two largest per-chunk counts and which chunk holds the
  // largest; max over all chunks except i is then a constant-time lookup.
  struct Top2 {
    std::int64_t best = 0;
    std::int64_t second = 0;
    std::uint32_t owner = 0;
  };
  std::vector<std::unordered_map<std::string, Top2>> index(static_cast<std::size_t>(orders));
  for (std::size_t i = 0; i < n_chunks; ++i) {
    for (int n = 1; n <= orders; ++n) {
      auto& level = index[static_cast<std::size_t>(n - 1)];
      for (const auto& [gram, cnt] : counts[i][static_cast<std::size_t>(n - 1)]) {
        Top2& slot = level[gram];
        if (cnt > slot.best) {
          slot.second = slot.best;
          slot.best = cnt;
          slot.owner = static_cast<std::uint32_t>(i);
        } else if (cnt > slot.second) {
          slot.second = cnt;
        }
      }
    }
  }

  std::vector<std::size_t> lens(n_chunks);
  for (std::size_t i = 0; i < n_chunks; ++i) {
    lens[i] = tokens[i].size();
  }

  std::vector<double> scores(n_chunks, 0.0);
  parallel_for(n_chunks, threads, [&](std::size_t i) {
    if (tokens[i].empty()) {
      scores[i] = 0.0;
      return;
    }
    std::vector<std::pair<std::int64_t, std::int64_t>> matched_total;
    for (int n = 1; n <= orders; ++n) {
      const auto& mine = counts[i][static_cast<std::size_t>(n - 1)];
      if (mine.empty()) {
        matched_total.emplace_back(0, 0);
        continue;
      }
      const auto& level = index[static_cast<std::size_t>(n - 1)];
      std::int64_t matched = 0;
      std::int64_t total = 0;
      for (const auto& [gram, cnt] : mine) {
        total += cnt;
        const Top2& slot = level.at(gram);
        const std::int64_t max_other =
            slot.owner == static_cast<std::uint32_t>(i) ? slot.second : slot.best;
        matched += std::min(cnt, max_other);
      }
      matched_total.emplace_back(matched, total);
    }
    std::vector<std::size_t> ref_lens;
    ref_lens.reserve(n_chunks - 1);
    for (std::size_t j = 0; j < n_chunks; ++j) {
      if (j != i) {
        ref_lens.push_back(lens[j]);
      }
    }
    scores[i] = combine(matched_total, lens[i], ref_lens, opts);
  });
  return scores;
}

}  // namespace cluerag
