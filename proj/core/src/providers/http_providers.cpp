#include "cluerag/providers/http_providers.hpp"

#include <chrono>
#include <condition_variable>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "cluerag/error.hpp"

namespace cluerag {

namespace detail {

namespace {

// Counting semaphore on a mutex; std::counting_semaphore's ctor takes the
// cap as a template-bound so a runtime cap is simpler this way.
class Gate {
 public:
  explicit Gate(int cap) : slots_(cap) {}
  void acquire() {
    std::unique_lock<std::mutex> lock(mu_);
    cv_.wait(lock, [&] { return slots_ > 0; });
    --slots_;
  }
  void release() {
    {
      std::lock_guard<std::mutex> lock(mu_);
      ++slots_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int slots_;
};

const char* kind_name(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::kLlm:
      return "llm";
    case ProviderKind::kEmbed:
      return "embed";
    default:
      return "rerank";
  }
}

}  // namespace

struct HttpTransport::Impl {
  explicit Impl(int cap) : gate(cap) {}
  Gate gate;
};

HttpTransport::HttpTransport(ProviderConfig cfg)
    : cfg_(std::move(cfg)), impl_(std::make_unique<Impl>(std::max(1, cfg_.concurrency_cap))) {}

HttpTransport::~HttpTransport() = default;

std::string HttpTransport::post_json(const std::string& path, const std::string& body) {
  impl_->gate.acquire();
  struct Release {
    Gate& gate;
    ~Release() { gate.release(); }
  } release{impl_->gate};

  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
    if (attempt > 0) {
      const auto delay = std::chrono::milliseconds(
          static_cast<long long>(cfg_.backoff_base_ms) << (attempt - 1));
      std::this_thread::sleep_for(delay);
    }
    httplib::Client client(cfg_.endpoint);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(120, 0);
    auto res = client.Post(path, body, "application/json");
    if (!res) {
      last_error = "transport error " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    return res->body;
  }
  throw ProviderError(std::string(kind_name(cfg_.kind)) + " service " + cfg_.endpoint + path +
                      " failed after " + std::to_string(cfg_.max_retries + 1) +
                      " attempts: " + last_error);
}

}  // namespace detail

namespace {

nlohmann::json parse_reply(const std::string& body, const std::string& what) {
  nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ProviderError(what + ": response is not a JSON object");
  }
  return j;
}

}  // namespace

Completion HttpLlm::complete(const std::string& prompt, std::size_t max_tokens) {
  nlohmann::json req{{"prompt", prompt}, {"max_tokens", max_tokens}};
  const nlohmann::json j = parse_reply(transport_.post_json("/complete", req.dump()), "complete");
  if (!j.contains("text") || !j["text"].is_string()) {
    throw ProviderError("complete: response lacks a string 'text' field");
  }
  Completion out;
  out.text = j["text"].get<std::string>();
  if (j.contains("usage") && j["usage"].is_object()) {
    const auto& usage = j["usage"];
    if (usage.contains("prompt_tokens")) {
      out.usage.prompt_tokens = usage["prompt_tokens"].get<std::size_t>();
    }
    if (usage.contains("completion_tokens")) {
      out.usage.completion_tokens = usage["completion_tokens"].get<std::size_t>();
    }
  }
  return out;
}

std::vector<Embedding> HttpEmbedder::embed(const std::vector<std::string>& texts) {
  if (texts.empty()) {
    return {};
  }
  nlohmann::json req{{"texts", texts}};
  const nlohmann::json j = parse_reply(transport_.post_json("/embed", req.dump()), "embed");
  if (!j.contains("vectors") || !j["vectors"].is_array()) {
    throw ProviderError("embed: response lacks a 'vectors' array");
  }
  const auto& vectors = j["vectors"];
  if (vectors.size() != texts.size()) {
    throw ProviderError("embed: got " + std::to_string(vectors.size()) + " vectors for " +
                        std::to_string(texts.size()) + " texts");
  }
  std::vector<Embedding> out;
  out.reserve(texts.size());
  std::size_t dim = 0;
  for (const auto& row : vectors) {
    if (!row.is_array()) {
      throw ProviderError("embed: vector row is not an array");
    }
    Embedding v;
    v.reserve(row.size());
    for (const auto& x : row) {
      v.push_back(x.get<float>());
    }
    if (dim == 0) {
      dim = v.size();
    } else if (v.size() != dim) {
      throw ProviderError("embed: inconsistent vector dimensions in one response");
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<double> HttpReranker::rerank(const std::string& query,
                                         const std::vector<std::string>& passages) {
  if (passages.empty()) {
    return {};
  }
  nlohmann::json req{{"query", query}, {"passages", passages}};
  const nlohmann::json j = parse_reply(transport_.post_json("/rerank", req.dump()), "rerank");
  if (!j.contains("scores") || !j["scores"].is_array()) {
    throw ProviderError("rerank: response lacks a 'scores' array");
  }
  const auto& scores = j["scores"];
  if (scores.size() != passages.size()) {
    throw ProviderError("rerank: got " + std::to_string(scores.size()) + " scores for " +
                        std::to_string(passages.size()) + " passages");
  }
  std::vector<double> out;
  out.reserve(passages.size());
  for (const auto& s : scores) {
    out.push_back(s.get<double>());
  }
  return out;
}

}  // namespace cluerag
