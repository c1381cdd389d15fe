#pragma once

#include <memory>

#include "cluerag/providers/provider.hpp"

namespace cluerag {

// Builds a client from cfg.endpoint (see ProviderConfig for the accepted
// forms). Rejects invalid configs and endpoint/kind mismatches.
std::unique_ptr<LlmClient> make_llm(const ProviderConfig& cfg);
std::unique_ptr<Embedder> make_embedder(const ProviderConfig& cfg);
std::unique_ptr<Reranker> make_reranker(const ProviderConfig& cfg);

// Applies the CLUE_LLM_URL / CLUE_EMBED_URL / CLUE_RERANK_URL environment
// override matching cfg.kind, when set and non-empty.
ProviderConfig with_env_override(ProviderConfig cfg);

}  // namespace cluerag
