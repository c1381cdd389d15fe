#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cluerag/corpus/types.hpp"
#include "cluerag/selection/bleu.hpp"
#include "cluerag/selection/knapsack.hpp"
#include "cluerag/vector/embedding.hpp"

namespace cluerag {

struct ChunkScore {
  std::string chunk_id;
  std::size_t weight = 0;  // w_i, token length
  double value = 0.0;      // v_i, relevance in [0, 1]
};

struct TokenBudget {
  double alpha = 1.0;
  std::size_t w_total = 0;
  std::size_t w_max = 0;  // ceil(alpha * w_total)
};

// W_max = ceil(alpha * w_total) with a tiny downward nudge before the ceil
// so exact products (0.25 * 8) do not drift up a whole token. Alpha outside
// [0, 1] is rejected.
TokenBudget make_budget(double alpha, std::size_t w_total);

enum class SelectionMetric {
  kBleu,    // v_i = BLEU(t_i, every other chunk)
  kCosine,  // v_i = max cosine between t_i and any other chunk embedding
};

using EmbedFn = std::function<std::vector<Embedding>(const std::vector<std::string>&)>;

struct SelectionOptions {
  SelectionMetric metric = SelectionMetric::kBleu;
  SolverMode solver = SolverMode::kAuto;
  BleuOptions bleu;
  std::size_t threads = 0;
  EmbedFn embed;  // required for the cosine metric
};

// One relevance score per chunk, aligned with the input order. A lone chunk
// has no references and scores zero; a note lands in `warnings` when given.
std::vector<ChunkScore> score_chunks(const std::vector<Chunk>& chunks,
                                     const SelectionOptions& opts = {},
                                     std::vector<std::string>* warnings = nullptr);

struct SelectionRow {
  std::string chunk_id;
  std::size_t weight = 0;
  double value = 0.0;
  bool selected = false;
};

struct SelectionReport {
  double alpha = 1.0;
  std::size_t w_total = 0;
  std::size_t w_max = 0;
  std::string solver_mode;
  std::string metric;
  std::vector<SelectionRow> rows;  // input order
  std::vector<std::string> warnings;
};

struct SelectionResult {
  std::vector<std::string> selected_ids;  // the core subset, sorted by id
  SelectionReport report;
};

// Scores every chunk, builds the budget, and solves the knapsack. The
// selected subset always satisfies Σ weight ≤ ceil(alpha * Σ weight).
SelectionResult chunk_selection(const std::vector<Chunk>& chunks, double alpha,
                                const SelectionOptions& opts = {});

// Deterministic pretty-printed JSON for the selection report.
std::string selection_report_to_json(const SelectionReport& report);

}  // namespace cluerag
