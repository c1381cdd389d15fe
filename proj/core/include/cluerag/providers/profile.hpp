#pragma once

#include <filesystem>
#include <string>

#include "cluerag/providers/provider.hpp"

namespace cluerag {

// The three service configs a run needs. Parsed from one JSON file of the
// form {"llm": {...}, "embed": {...}, "rerank": {...}} where every section
// and every field is optional. Section fields: endpoint, model_name,
// max_retries, concurrency_cap, token_limit, backoff_base_ms. Unknown keys
// are rejected so config typos fail loudly.
struct ProviderProfile {
  ProviderConfig llm;
  ProviderConfig embed;
  ProviderConfig rerank;
};

// All-mock profile (the rerank mock scores by lexical overlap).
ProviderProfile default_provider_profile();

ProviderProfile parse_provider_profile(const std::string& content, const std::string& name);
ProviderProfile load_provider_profile(const std::filesystem::path& path);

// Applies the CLUE_LLM_URL / CLUE_EMBED_URL / CLUE_RERANK_URL environment
// overrides to the matching sections.
ProviderProfile with_env_overrides(ProviderProfile profile);

// True when any CLUE_*_URL override is set and non-empty.
bool env_overrides_present();

}  // namespace cluerag
