#include "cluerag/providers/token_ledger.hpp"

#include <json.hpp>

#include "cluerag/error.hpp"

namespace cluerag {

void TokenLedger::add_llm(LedgerPhase phase, std::uint64_t prompt_tokens,
                          std::uint64_t completion_tokens) {
  if (phase == LedgerPhase::kIndexing) {
    indexing_prompt_.fetch_add(prompt_tokens, std::memory_order_relaxed);
    indexing_completion_.fetch_add(completion_tokens, std::memory_order_relaxed);
    indexing_calls_.fetch_add(1, std::memory_order_relaxed);
  } else {
    query_prompt_.fetch_add(prompt_tokens, std::memory_order_relaxed);
    query_completion_.fetch_add(completion_tokens, std::memory_order_relaxed);
    query_calls_.fetch_add(1, std::memory_order_relaxed);
  }
}

void TokenLedger::note_query() { queries_.fetch_add(1, std::memory_order_relaxed); }

TokenLedger::Snapshot TokenLedger::snapshot() const {
  Snapshot s;
  s.indexing_prompt = indexing_prompt_.load(std::memory_order_relaxed);
  s.indexing_completion = indexing_completion_.load(std::memory_order_relaxed);
  s.indexing_calls = indexing_calls_.load(std::memory_order_relaxed);
  s.query_prompt = query_prompt_.load(std::memory_order_relaxed);
  s.query_completion = query_completion_.load(std::memory_order_relaxed);
  s.query_calls = query_calls_.load(std::memory_order_relaxed);
  s.queries = queries_.load(std::memory_order_relaxed);
  return s;
}

std::string cost_report_to_json(const TokenLedger::Snapshot& snap,
                                const std::string& tokenizer_name) {
  nlohmann::json j;
  j["tokenizer"] = tokenizer_name;
  j["indexing"] = {{"prompt_tokens", snap.indexing_prompt},
                   {"completion_tokens", snap.indexing_completion},
                   {"llm_calls", snap.indexing_calls}};
  nlohmann::json query = {{"prompt_tokens", snap.query_prompt},
                          {"completion_tokens", snap.query_completion},
                          {"llm_calls", snap.query_calls},
                          {"queries", snap.queries}};
  const double denom = snap.queries == 0 ? 1.0 : static_cast<double>(snap.queries);
  query["avg_prompt_tokens_per_query"] = static_cast<double>(snap.query_prompt) / denom;
  query["avg_completion_tokens_per_query"] = static_cast<double>(snap.query_completion) / denom;
  j["query"] = std::move(query);
  return j.dump(2) + "\n";
}

Completion LedgeredLlm::complete(const std::string& prompt, std::size_t max_tokens) {
  const std::size_t prompt_tokens = tok_.count(prompt);
  if (token_limit_ > 0 && prompt_tokens > token_limit_) {
    throw ProviderError("prompt of " + std::to_string(prompt_tokens) +
                        " tokens exceeds the limit of " + std::to_string(token_limit_));
  }
  Completion res = inner_.complete(prompt, max_tokens);
  ledger_.add_llm(phase_.load(std::memory_order_relaxed), prompt_tokens,
                  tok_.count(res.text));
  return res;
}

}  // namespace cluerag
