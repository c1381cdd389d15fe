#pragma once

#include <atomic>
#include <cstdint>
#include <string>

#include "cluerag/corpus/tokenizer.hpp"
#include "cluerag/providers/provider.hpp"

namespace cluerag {

enum class LedgerPhase { kIndexing, kQuery };

// Thread-safe LLM token accounting, split by pipeline phase. Counts come
// from the configured tokenizer, not from provider-reported usage, so they
// are comparable across providers within a run.
class TokenLedger {
 public:
  struct Snapshot {
    std::uint64_t indexing_prompt = 0;
    std::uint64_t indexing_completion = 0;
    std::uint64_t indexing_calls = 0;
    std::uint64_t query_prompt = 0;
    std::uint64_t query_completion = 0;
    std::uint64_t query_calls = 0;
    std::uint64_t queries = 0;  // denominator for per-query averages
  };

  void add_llm(LedgerPhase phase, std::uint64_t prompt_tokens, std::uint64_t completion_tokens);
  void note_query();
  Snapshot snapshot() const;

 private:
  std::atomic<std::uint64_t> indexing_prompt_{0};
  std::atomic<std::uint64_t> indexing_completion_{0};
  std::atomic<std::uint64_t> indexing_calls_{0};
  std::atomic<std::uint64_t> query_prompt_{0};
  std::atomic<std::uint64_t> query_completion_{0};
  std::atomic<std::uint64_t> query_calls_{0};
  std::atomic<std::uint64_t> queries_{0};
};

// Deterministic JSON cost report; labels which tokenizer produced the
// numbers and reports per-query averages alongside the totals.
std::string cost_report_to_json(const TokenLedger::Snapshot& snap,
                                const std::string& tokenizer_name);

// LlmClient decorator: enforces the prompt token limit before any call goes
// out and records both directions in the ledger under the current phase.
class LedgeredLlm final : public LlmClient {
 public:
  LedgeredLlm(LlmClient& inner, TokenLedger& ledger, const Tokenizer& tok,
              std::size_t token_limit, LedgerPhase phase = LedgerPhase::kIndexing)
      : inner_(inner), ledger_(ledger), tok_(tok), token_limit_(token_limit), phase_(phase) {}

  void set_phase(LedgerPhase phase) { phase_.store(phase, std::memory_order_relaxed); }

  Completion complete(const std::string& prompt, std::size_t max_tokens) override;

 private:
  LlmClient& inner_;
  TokenLedger& ledger_;
  const Tokenizer& tok_;
  std::size_t token_limit_;
  std::atomic<LedgerPhase> phase_;
};

}  // namespace cluerag
