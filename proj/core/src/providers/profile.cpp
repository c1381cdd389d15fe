#include "cluerag/providers/profile.hpp"

#include <cstdlib>

#include <json.hpp>

#include "cluerag/error.hpp"
#include "cluerag/providers/factory.hpp"
#include "cluerag/util/jsonl.hpp"

namespace cluerag {

namespace {

using nlohmann::json;

ProviderConfig parse_section(const json& j, ProviderKind kind, const std::string& name,
                             const std::string& section) {
  const auto fail = [&](const std::string& why) {
    return ParseError(name + ": section \"" + section + "\": " + why);
  };
  if (!j.is_object()) {
    throw fail("must be a JSON object");
  }
  ProviderConfig cfg;
  cfg.kind = kind;
  for (const auto& [key, value] : j.items()) {
    if (key == "endpoint") {
      if (!value.is_string()) {
        throw fail("\"endpoint\" must be a string");
      }
      cfg.endpoint = value.get<std::string>();
    } else if (key == "model_name") {
      if (!value.is_string()) {
        throw fail("\"model_name\" must be a string");
      }
      cfg.model_name = value.get<std::string>();
    } else if (key == "max_retries") {
      if (!value.is_number_integer() || value.get<int>() < 0) {
        throw fail("\"max_retries\" must be a non-negative integer");
      }
      cfg.max_retries = value.get<int>();
    } else if (key == "concurrency_cap") {
      if (!value.is_number_integer() || value.get<int>() < 1) {
        throw fail("\"concurrency_cap\" must be a positive integer");
      }
      cfg.concurrency_cap = value.get<int>();
    } else if (key == "token_limit") {
      if (!value.is_number_integer() || value.get<long long>() < 0) {
        throw fail("\"token_limit\" must be a non-negative integer");
      }
      cfg.token_limit = value.get<std::size_t>();
    } else if (key == "backoff_base_ms") {
      if (!value.is_number_integer() || value.get<int>() < 0) {
        throw fail("\"backoff_base_ms\" must be a non-negative integer");
      }
      cfg.backoff_base_ms = value.get<int>();
    } else {
      throw fail("unknown key \"" + key + "\"");
    }
  }
  return cfg;
}

bool env_set(const char* var) {
  const char* value = std::getenv(var);
  return value != nullptr && value[0] != '\0';
}

}  // namespace

ProviderProfile default_provider_profile() {
  ProviderProfile profile;
  profile.llm.kind = ProviderKind::kLlm;
  profile.embed.kind = ProviderKind::kEmbed;
  profile.rerank.kind = ProviderKind::kRerank;
  return profile;
}

ProviderProfile parse_provider_profile(const std::string& content, const std::string& name) {
  const json j = json::parse(content, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ParseError(name + ": provider profile must be a JSON object");
  }
  ProviderProfile profile = default_provider_profile();
  for (const auto& [key, value] : j.items()) {
    if (key == "llm") {
      profile.llm = parse_section(value, ProviderKind::kLlm, name, key);
    } else if (key == "embed") {
      profile.embed = parse_section(value, ProviderKind::kEmbed, name, key);
    } else if (key == "rerank") {
      profile.rerank = parse_section(value, ProviderKind::kRerank, name, key);
    } else {
      throw ParseError(name + ": unknown section \"" + key +
                       "\" (expected llm, embed, rerank)");
    }
  }
  return profile;
}

ProviderProfile load_provider_profile(const std::filesystem::path& path) {
  return parse_provider_profile(read_file(path), path.filename().string());
}

ProviderProfile with_env_overrides(ProviderProfile profile) {
  profile.llm = with_env_override(std::move(profile.llm));
  profile.embed = with_env_override(std::move(profile.embed));
  profile.rerank = with_env_override(std::move(profile.rerank));
  return profile;
}

bool env_overrides_present() {
  return env_set("CLUE_LLM_URL") || env_set("CLUE_EMBED_URL") || env_set("CLUE_RERANK_URL");
}

}  // namespace cluerag
