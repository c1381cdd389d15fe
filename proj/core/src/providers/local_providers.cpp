#include "cluerag/providers/local_providers.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <json.hpp>

#include "cluerag/corpus/sentence_splitter.hpp"
#include "cluerag/corpus/tokenizer.hpp"
#include "cluerag/error.hpp"
#include "cluerag/extraction/ner.hpp"
#include "cluerag/extraction/prompts.hpp"
#include "cluerag/util/hash.hpp"
#include "cluerag/util/jsonl.hpp"
#include "cluerag/util/text.hpp"

namespace cluerag {

namespace {

using nlohmann::json;

std::string_view first_line(std::string_view text) {
  const std::size_t nl = text.find('\n');
  return nl == std::string_view::npos ? text : text.substr(0, nl);
}

// The passage sits between the final "Input: " marker and the trailing
// "Output:" line of the unit-extraction template.
std::string extract_passage(std::string_view prompt) {
  const std::string_view marker = "\nInput: ";
  const std::size_t at = prompt.rfind(marker);
  if (at == std::string_view::npos) {
    return {};
  }
  std::string_view tail = prompt.substr(at + marker.size());
  const std::string_view suffix = "\nOutput:";
  if (tail.size() >= suffix.size() &&
      tail.substr(tail.size() - suffix.size()) == suffix) {
    tail.remove_suffix(suffix.size());
  }
  return std::string(tail);
}

std::string extract_context(std::string_view prompt) {
  const std::string_view begin_marker = "Given Context: ";
  const std::size_t begin = prompt.find(begin_marker);
  if (begin == std::string_view::npos) {
    return {};
  }
  std::string_view tail = prompt.substr(begin + begin_marker.size());
  const std::size_t end = tail.find("\n\nGive the best full answer");
  return std::string(end == std::string_view::npos ? tail : tail.substr(0, end));
}

std::string units_reply(const std::vector<std::string>& units) {
  // Mirrors the shape the extraction prompt teaches, trailing comma
  // included, which keeps the tolerant reply parser honest.
  std::string out = "{\n    \"knowledge units\": [\n";
  for (const auto& u : units) {
    out += "        ";
    out += json(u).dump();
    out += ",\n";
  }
  out += "    ]\n}";
  return out;
}

// The question sits between the "Question: " marker and the trailing
// "Output:" line of the query-entity template.
std::string extract_question(std::string_view prompt) {
  const std::string_view marker = "Question: ";
  const std::size_t at = prompt.rfind(marker);
  if (at == std::string_view::npos) {
    return {};
  }
  std::string_view tail = prompt.substr(at + marker.size());
  const std::string_view suffix = "\nOutput:";
  if (tail.size() >= suffix.size() &&
      tail.substr(tail.size() - suffix.size()) == suffix) {
    tail.remove_suffix(suffix.size());
  }
  return std::string(tail);
}

}  // namespace

Completion MockLlm::complete(const std::string& prompt, std::size_t max_tokens) {
  (void)max_tokens;
  Completion res;
  const auto canned = canned_.find(prompt);
  if (canned != canned_.end()) {
    res.text = canned->second;
  } else if (prompt.rfind(first_line(kUnitExtractionTemplate), 0) == 0) {
    res.text = units_reply(split_sentences(extract_passage(prompt)));
  } else if (prompt.rfind(first_line(kAnswerTemplate), 0) == 0) {
    const std::string context = extract_context(prompt);
    res.text = context.empty() ? "no answer" : std::string(first_line(context));
  } else if (prompt.rfind(first_line(kQueryEntityTemplate), 0) == 0) {
    res.text = json{{"entities", default_ner().extract(extract_question(prompt))}}.dump();
  } else {
    res.text = "mock-completion";
  }
  const auto& tok = default_tokenizer();
  res.usage.prompt_tokens = tok.count(prompt);
  res.usage.completion_tokens = tok.count(res.text);
  return res;
}

std::vector<Embedding> MockEmbedder::embed(const std::vector<std::string>& texts) {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    Embedding v(dim_);
    std::uint64_t state = fnv1a64(text);
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      const std::uint64_t bits = splitmix64(state);
      // 53 high bits -> [0, 1) -> [-1, 1).
      const double u = static_cast<double>(bits >> 11) * (1.0 / 9007199254740992.0);
      v[i] = static_cast<float>(2.0 * u - 1.0);
      norm_sq += static_cast<double>(v[i]) * static_cast<double>(v[i]);
    }
    if (norm_sq == 0.0) {
      v[0] = 1.0f;
      norm_sq = 1.0;
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& x : v) {
      x = static_cast<float>(x * inv);
    }
    out.push_back(std::move(v));
  }
  return out;
}

FixtureEmbedder::FixtureEmbedder(const std::filesystem::path& path) : source_(path.string()) {
  const json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("dim") || !j.contains("vectors") ||
      !j["vectors"].is_object()) {
    throw ParseError("embedding fixture " + source_ +
                     " must be {\"dim\": D, \"vectors\": {text: [..]}}");
  }
  dim_ = j["dim"].get<std::size_t>();
  for (const auto& [text, arr] : j["vectors"].items()) {
    if (!arr.is_array() || arr.size() != dim_) {
      throw ParseError("embedding fixture " + source_ + ": vector for \"" + text +
                       "\" does not have dim " + std::to_string(dim_));
    }
    Embedding v;
    v.reserve(dim_);
    for (const auto& x : arr) {
      v.push_back(x.get<float>());
    }
    vectors_.emplace(text, std::move(v));
  }
}

std::vector<Embedding> FixtureEmbedder::embed(const std::vector<std::string>& texts) {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    const auto it = vectors_.find(text);
    if (it == vectors_.end()) {
      throw ProviderError("embedding fixture " + source_ + " has no vector for \"" + text + "\"");
    }
    out.push_back(it->second);
  }
  return out;
}

FixtureReranker::FixtureReranker(const std::filesystem::path& path) : source_(path.string()) {
  const json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("by_query") ||
      !j["by_query"].is_object()) {
    throw ParseError("rerank fixture " + source_ +
                     " must be {\"by_query\": {q: {passage: score}}}");
  }
  for (const auto& [query, passages] : j["by_query"].items()) {
    if (!passages.is_object()) {
      throw ParseError("rerank fixture " + source_ + ": entry for \"" + query +
                       "\" must map passages to scores");
    }
    auto& table = by_query_[query];
    for (const auto& [passage, score] : passages.items()) {
      table[passage] = score.get<double>();
    }
  }
  if (j.contains("default")) {
    has_default_ = true;
    default_score_ = j["default"].get<double>();
  }
}

std::vector<double> FixtureReranker::rerank(const std::string& query,
                                            const std::vector<std::string>& passages) {
  std::vector<double> out;
  out.reserve(passages.size());
  const auto q = by_query_.find(query);
  for (const auto& p : passages) {
    if (q != by_query_.end()) {
      const auto hit = q->second.find(p);
      if (hit != q->second.end()) {
        out.push_back(hit->second);
        continue;
      }
    }
    if (has_default_) {
      out.push_back(default_score_);
      continue;
    }
    throw ProviderError("rerank fixture " + source_ + " has no score for query \"" + query +
                        "\" and passage \"" + p + "\"");
  }
  return out;
}

std::vector<double> LexicalReranker::rerank(const std::string& query,
                                            const std::vector<std::string>& passages) {
  const auto token_set = [](const std::string& text) {
    std::unordered_set<std::string> out;
    for (const auto& t : token_texts(default_tokenizer(), text)) {
      out.insert(to_lower(t));
    }
    return out;
  };
  const std::unordered_set<std::string> q = token_set(query);
  std::vector<double> out;
  out.reserve(passages.size());
  for (const auto& passage : passages) {
    const std::unordered_set<std::string> p = token_set(passage);
    std::size_t inter = 0;
    for (const auto& t : q) {
      inter += p.count(t);
    }
    const std::size_t uni = q.size() + p.size() - inter;
    out.push_back(uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni));
  }
  return out;
}

}  // namespace cluerag
