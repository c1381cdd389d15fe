#include "cluerag/providers/factory.hpp"

#include <cstdlib>
#include <map>

#include <json.hpp>

#include "cluerag/error.hpp"
#include "cluerag/providers/http_providers.hpp"
#include "cluerag/providers/local_providers.hpp"
#include "cluerag/util/jsonl.hpp"

namespace cluerag {

namespace {

constexpr const char* kFixturePrefix = "fixture:";

void validate(const ProviderConfig& cfg) {
  if (cfg.max_retries < 0) {
    throw ParseError("provider max_retries must be >= 0");
  }
  if (cfg.concurrency_cap < 1) {
    throw ParseError("provider concurrency_cap must be >= 1");
  }
}

bool is_http(const std::string& endpoint) {
  return endpoint.rfind("http://", 0) == 0 || endpoint.rfind("https://", 0) == 0;
}

std::string fixture_path(const std::string& endpoint) {
  return endpoint.substr(std::string(kFixturePrefix).size());
}

// Canned-completion table for a fixture LLM: {"responses": {prompt: text}}.
std::map<std::string, std::string> load_canned(const std::string& path) {
  const nlohmann::json j = nlohmann::json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("responses") ||
      !j["responses"].is_object()) {
    throw ParseError("llm fixture " + path + " must be {\"responses\": {prompt: text}}");
  }
  std::map<std::string, std::string> out;
  for (const auto& [prompt, text] : j["responses"].items()) {
    out[prompt] = text.get<std::string>();
  }
  return out;
}

[[noreturn]] void bad_endpoint(const char* kind, const std::string& endpoint) {
  throw ParseError(std::string("unsupported ") + kind + " endpoint '" + endpoint + "'");
}

}  // namespace

std::unique_ptr<LlmClient> make_llm(const ProviderConfig& cfg) {
  validate(cfg);
  if (cfg.endpoint == "mock") {
    return std::make_unique<MockLlm>();
  }
  if (cfg.endpoint.rfind(kFixturePrefix, 0) == 0) {
    return std::make_unique<MockLlm>(load_canned(fixture_path(cfg.endpoint)));
  }
  if (is_http(cfg.endpoint)) {
    return std::make_unique<HttpLlm>(cfg);
  }
  bad_endpoint("llm", cfg.endpoint);
}

std::unique_ptr<Embedder> make_embedder(const ProviderConfig& cfg) {
  validate(cfg);
  if (cfg.endpoint == "mock") {
    return std::make_unique<MockEmbedder>();
  }
  if (cfg.endpoint.rfind(kFixturePrefix, 0) == 0) {
    return std::make_unique<FixtureEmbedder>(fixture_path(cfg.endpoint));
  }
  if (is_http(cfg.endpoint)) {
    return std::make_unique<HttpEmbedder>(cfg);
  }
  bad_endpoint("embed", cfg.endpoint);
}

std::unique_ptr<Reranker> make_reranker(const ProviderConfig& cfg) {
  validate(cfg);
  if (cfg.endpoint == "mock" || cfg.endpoint == "lexical") {
    return std::make_unique<LexicalReranker>();
  }
  if (cfg.endpoint.rfind(kFixturePrefix, 0) == 0) {
    return std::make_unique<FixtureReranker>(fixture_path(cfg.endpoint));
  }
  if (is_http(cfg.endpoint)) {
    return std::make_unique<HttpReranker>(cfg);
  }
  bad_endpoint("rerank", cfg.endpoint);
}

ProviderConfig with_env_override(ProviderConfig cfg) {
  const char* var = nullptr;
  switch (cfg.kind) {
    case ProviderKind::kLlm:
      var = "CLUE_LLM_URL";
      break;
    case ProviderKind::kEmbed:
      var = "CLUE_EMBED_URL";
      break;
    case ProviderKind::kRerank:
      var = "CLUE_RERANK_URL";
      break;
  }
  if (const char* value = std::getenv(var); value != nullptr && value[0] != '\0') {
    cfg.endpoint = value;
  }
  return cfg;
}

}  // namespace cluerag
