#include "cluerag/selection/chunk_selection.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <json.hpp>

#include "cluerag/error.hpp"
#include "cluerag/util/parallel.hpp"

namespace cluerag {

namespace {

std::vector<double> cosine_scores(const std::vector<Chunk>& chunks, const SelectionOptions& opts) {
  if (!opts.embed) {
    throw ParseError("cosine selection metric requires an embedding function");
  }
  std::vector<std::string> texts;
  texts.reserve(chunks.size());
  for (const auto& c : chunks) {
    texts.push_back(c.text);
  }
  const std::vector<Embedding> vecs = opts.embed(texts);
  if (vecs.size() != chunks.size()) {
    throw ProviderError("embedding count mismatch: got " + std::to_string(vecs.size()) +
                        " for " + std::to_string(chunks.size()) + " chunks");
  }
  std::vector<double> out(chunks.size(), 0.0);
  parallel_for(chunks.size(), opts.threads, [&](std::size_t i) {
    double best = 0.0;
    for (std::size_t j = 0; j < chunks.size(); ++j) {
      if (j != i) {
        best = std::max(best, cosine_similarity(vecs[i], vecs[j]));
      }
    }
    out[i] = std::clamp(best, 0.0, 1.0);
  });
  return out;
}

}  // namespace

TokenBudget make_budget(double alpha, std::size_t w_total) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ParseError("alpha must be in [0, 1], got " + std::to_string(alpha));
  }
  TokenBudget b;
  b.alpha = alpha;
  b.w_total = w_total;
  const double raw = alpha * static_cast<double>(w_total);
  // The nudge keeps exact products like 0.25 * 8 from ceiling up a token.
  const double ceiled = std::ceil(raw - 1e-9);
  b.w_max = ceiled <= 0.0 ? 0 : static_cast<std::size_t>(ceiled);
  return b;
}

std::vector<ChunkScore> score_chunks(const std::vector<Chunk>& chunks,
                                     const SelectionOptions& opts,
                                     std::vector<std::string>* warnings) {
  std::vector<ChunkScore> out;
  out.reserve(chunks.size());
  if (chunks.size() == 1 && warnings != nullptr) {
    warnings->push_back("single-chunk corpus: no references to score against; value forced to 0");
  }
  std::vector<double> values;
  if (chunks.empty()) {
    return out;
  }
  if (chunks.size() == 1) {
    values = {0.0};
  } else if (opts.metric == SelectionMetric::kBleu) {
    values = corpus_bleu_scores(chunks, opts.bleu, default_tokenizer(), opts.threads);
  } else {
    values = cosine_scores(chunks, opts);
  }
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    out.push_back({chunks[i].id, chunks[i].token_len, values[i]});
  }
  return out;
}

SelectionResult chunk_selection(const std::vector<Chunk>& chunks, double alpha,
                                const SelectionOptions& opts) {
  SelectionResult result;
  SelectionReport& report = result.report;
  report.alpha = alpha;
  report.metric = opts.metric == SelectionMetric::kBleu ? "bleu" : "cosine";

  const std::vector<ChunkScore> scores = score_chunks(chunks, opts, &report.warnings);
  std::size_t w_total = 0;
  for (const auto& s : scores) {
    w_total += s.weight;
  }
  const TokenBudget budget = make_budget(alpha, w_total);
  report.w_total = budget.w_total;
  report.w_max = budget.w_max;

  std::vector<KnapsackItem> items;
  items.reserve(scores.size());
  for (const auto& s : scores) {
    items.push_back({s.chunk_id, s.weight, s.value});
  }
  KnapsackResult solved = knapsack_select(items, budget.w_max, opts.solver);
  report.solver_mode = solved.mode;

  std::unordered_set<std::string> selected(solved.selected.begin(), solved.selected.end());
  report.rows.reserve(scores.size());
  for (const auto& s : scores) {
    report.rows.push_back({s.chunk_id, s.weight, s.value, selected.count(s.chunk_id) > 0});
  }
  result.selected_ids = std::move(solved.selected);
  return result;
}

std::string selection_report_to_json(const SelectionReport& report) {
  nlohmann::json j;
  j["alpha"] = report.alpha;
  j["W_total"] = report.w_total;
  j["W_max"] = report.w_max;
  j["solver_mode"] = report.solver_mode;
  j["metric"] = report.metric;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"chunk_id", r.chunk_id},
                    {"weight", r.weight},
                    {"value", r.value},
                    {"selected", r.selected}});
  }
  j["chunks"] = std::move(rows);
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

}  // namespace cluerag
