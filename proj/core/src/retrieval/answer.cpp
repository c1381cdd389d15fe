#include "cluerag/retrieval/answer.hpp"

#include "cluerag/corpus/tokenizer.hpp"
#include "cluerag/extraction/prompts.hpp"

namespace cluerag {

namespace {

std::string assemble(const std::string& query, const std::vector<std::string>& chunks,
                     std::size_t keep) {
  std::string context;
  for (std::size_t i = 0; i < keep; ++i) {
    if (!context.empty()) {
      context.push_back('\n');
    }
    context += chunks[i];
  }
  return render_answer_prompt(context, query);
}

}  // namespace

AnswerResult generate_answer(const std::string& query,
                             const std::vector<std::string>& ranked_chunks,
                             LlmClient& llm, const AnswerOptions& opts) {
  AnswerResult result;
  std::size_t keep = ranked_chunks.size();
  result.prompt = assemble(query, ranked_chunks, keep);

  if (opts.prompt_token_limit > 0) {
    const Tokenizer& tok = default_tokenizer();
    while (keep > 0 && tok.count(result.prompt) > opts.prompt_token_limit) {
      --keep;
      result.prompt = assemble(query, ranked_chunks, keep);
    }
    result.dropped_chunks = ranked_chunks.size() - keep;
    if (result.dropped_chunks > 0) {
      result.warnings.push_back("dropped " + std::to_string(result.dropped_chunks) +
                                " lowest-ranked chunks to fit the prompt token limit of " +
                                std::to_string(opts.prompt_token_limit));
    }
    if (tok.count(result.prompt) > opts.prompt_token_limit) {
      result.warnings.push_back("prompt still exceeds the token limit with no context left");
    }
  }

  const Completion res = llm.complete(result.prompt, opts.completion_max_tokens);
  result.text = res.text;
  result.usage = res.usage;
  return result;
}

}  // namespace cluerag
