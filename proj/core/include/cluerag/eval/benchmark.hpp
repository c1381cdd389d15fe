#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "cluerag/eval/metrics.hpp"
#include "cluerag/providers/token_ledger.hpp"
#include "cluerag/retrieval/answer.hpp"
#include "cluerag/retrieval/retrieval.hpp"

namespace cluerag {

struct QAItem {
  std::string id;
  std::string question;
  std::vector<std::string> golden_answers;  // at least one
  std::vector<std::string> supporting;      // optional passage ids; kept for analysis only
};

// Parses {"id", "question", "answers": [..], "supporting"?: [..]} JSON
// lines. Rejects duplicate ids, empty questions, and empty answer lists.
std::vector<QAItem> parse_qa_items(const std::string& content, const std::string& name);
std::vector<QAItem> load_qa_items(const std::filesystem::path& path);

struct BenchmarkOptions {
  RetrievalParams retrieval;
  AnswerOptions answer;
  MetricOptions metrics;
  std::size_t workers = 1;
};

struct EvalProviders {
  Embedder* embedder = nullptr;
  Reranker* reranker = nullptr;
  LlmClient* llm = nullptr;
  const QueryEntityExtractor* query_entities = nullptr;  // nullptr = rule-based
  TokenLedger* ledger = nullptr;  // optional; counts queries and feeds the cost section
};

struct ItemResult {
  std::string id;
  std::string question;
  std::string generated;
  std::vector<ScoredId> chunks;
  int accuracy = 0;
  double f1 = 0.0;
  std::string error;  // provider failure; nonempty rows sit out of the aggregates
};

struct EvalReport {
  std::vector<ItemResult> items;  // ordered by item id
  std::size_t evaluated = 0;
  std::size_t failed = 0;
  double mean_accuracy_pct = 0.0;
  double mean_f1_pct = 0.0;
  TokenLedger::Snapshot cost;  // zeros when no ledger was supplied
};

// Retrieves, answers, and scores every item, up to `workers` at a time.
// Provider failures are recorded on the item and excluded from the
// aggregates. Items come back sorted by id regardless of worker count.
EvalReport run_benchmark(const GraphIndex& index, const std::vector<QAItem>& items,
                         const EvalProviders& providers, const BenchmarkOptions& opts = {});

// Convenience overload that loads a persisted index and a JSONL dataset.
EvalReport run_benchmark(const std::filesystem::path& index_dir,
                         const std::filesystem::path& qa_path,
                         const EvalProviders& providers, const BenchmarkOptions& opts = {});

// Stable serializations: the whole report as pretty JSON and one compact
// JSON line per item.
std::string eval_report_to_json(const EvalReport& report);
std::string per_item_jsonl(const EvalReport& report);

}  // namespace cluerag
