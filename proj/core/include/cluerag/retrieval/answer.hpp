#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cluerag/providers/provider.hpp"

namespace cluerag {

struct AnswerOptions {
  std::size_t completion_max_tokens = 512;
  // Prompt budget in tokens; 0 disables the check. When the assembled
  // prompt exceeds it, lowest-ranked chunks are dropped until it fits.
  std::size_t prompt_token_limit = 0;
};

struct AnswerResult {
  std::string text;
  std::string prompt;  // the exact prompt sent
  std::size_t dropped_chunks = 0;
  CompletionUsage usage;
  std::vector<std::string> warnings;
};

// Fills the answer template with the ranked chunk texts joined by newlines
// as context (the query is duplicated after the instructions by the
// renderer) and returns the completion.
AnswerResult generate_answer(const std::string& query,
                             const std::vector<std::string>& ranked_chunks,
                             LlmClient& llm, const AnswerOptions& opts = {});

}  // namespace cluerag
