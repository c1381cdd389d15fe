#include <doctest.h>

#include <atomic>
#include <cmath>
#include <map>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "cluerag/corpus/tokenizer.hpp"
#include "cluerag/error.hpp"
#include "cluerag/extraction/prompts.hpp"
#include "cluerag/providers/factory.hpp"
#include "cluerag/providers/http_providers.hpp"
#include "cluerag/providers/local_providers.hpp"
#include "cluerag/providers/profile.hpp"
#include "cluerag/providers/token_ledger.hpp"
#include "cluerag/util/jsonl.hpp"
#include "cluerag/util/parallel.hpp"
#include "support/temp.hpp"

using namespace cluerag;

TEST_CASE("prompt templates match their asset files byte for byte") {
  const auto dir = source_prompt_dir();
  CHECK(read_file(dir / kUnitExtractionAsset) == kUnitExtractionTemplate);
  CHECK(read_file(dir / kAnswerAsset) == kAnswerTemplate);
  CHECK(read_file(dir / kQueryEntityAsset) == kQueryEntityTemplate);
}

TEST_CASE("prompt renderers substitute placeholders") {
  const std::string p = render_unit_extraction_prompt("Some passage here.");
  CHECK(p.find("Input: Some passage here.\nOutput:") != std::string::npos);
  CHECK(p.find("{passage}") == std::string::npos);

  const std::string a = render_answer_prompt("ctx line", "what is it?");
  CHECK(a.find("Given Context: ctx line") != std::string::npos);
  CHECK(a.find("question :what is it?") != std::string::npos);
  // The question is repeated at the very end of the prompt.
  CHECK(a.rfind("what is it?") == a.size() - std::string("what is it?").size());
  CHECK(a.rfind("what is it?") > a.find("question :what is it?"));
}

TEST_CASE("mock llm: canned table wins, calls are deterministic") {
  MockLlm llm(std::map<std::string, std::string>{{"ping", "pong"}});
  CHECK(llm.complete("ping", 64).text == "pong");
  const auto a = llm.complete("anything else", 64);
  const auto b = llm.complete("anything else", 64);
  CHECK(a.text == b.text);
  CHECK(a.usage.prompt_tokens == default_tokenizer().count("anything else"));
}

TEST_CASE("mock llm: unit-extraction prompts return sentence units as JSON") {
  MockLlm llm;
  const auto res = llm.complete(render_unit_extraction_prompt("First fact. Second fact."), 256);
  // Trailing commas mirror the template's examples; the reply parser is
  // expected to cope.
  const std::string expected =
      "{\n    \"knowledge units\": [\n        \"First fact.\",\n        \"Second fact.\",\n    ]\n}";
  CHECK(res.text == expected);
}

TEST_CASE("mock llm: answer prompts echo the first context line") {
  MockLlm llm;
  const auto res = llm.complete(render_answer_prompt("top chunk\nsecond chunk", "q?"), 256);
  CHECK(res.text == "top chunk");
}

TEST_CASE("mock embedder: deterministic unit-norm vectors of the configured dim") {
  MockEmbedder emb(64);
  const auto a = emb.embed({"alpha", "beta", "alpha"});
  REQUIRE(a.size() == 3);
  CHECK(a[0].size() == 64);
  CHECK(a[0] == a[2]);
  CHECK(a[0] != a[1]);
  double norm = 0.0;
  for (const float x : a[0]) norm += static_cast<double>(x) * x;
  CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("fixture embedder: exact table, strict on unknown texts") {
  testing::TempDir tmp;
  const auto p = tmp.file("embed.json");
  write_file(p, R"({"dim": 2, "vectors": {"hello": [1.0, 2.0], "world": [0.5, -1.0]}})");
  FixtureEmbedder emb(p);
  CHECK(emb.dim() == 2);
  const auto vecs = emb.embed({"world", "hello"});
  CHECK(vecs[0] == Embedding{0.5f, -1.0f});
  CHECK(vecs[1] == Embedding{1.0f, 2.0f});
  CHECK_THROWS_AS(emb.embed({"missing"}), ProviderError);

  const auto bad = tmp.file("bad.json");
  write_file(bad, R"({"dim": 3, "vectors": {"x": [1.0]}})");
  CHECK_THROWS_AS(FixtureEmbedder{bad}, ParseError);
}

TEST_CASE("fixture reranker: table values verbatim, default fallback optional") {
  testing::TempDir tmp;
  const auto p = tmp.file("rerank.json");
  write_file(p, R"({"by_query": {"q": {"good": 0.9, "bad": 0.1}}, "default": 0.05})");
  FixtureReranker rr(p);
  CHECK(rr.rerank("q", {"bad", "good", "unseen"}) == std::vector<double>{0.1, 0.9, 0.05});

  const auto strict = tmp.file("strict.json");
  write_file(strict, R"({"by_query": {"q": {"good": 0.9}}})");
  FixtureReranker rr2(strict);
  CHECK_THROWS_AS(rr2.rerank("q", {"unseen"}), ProviderError);
  CHECK_THROWS_AS(rr2.rerank("other", {"good"}), ProviderError);
}

TEST_CASE("lexical reranker: token-overlap scores") {
  LexicalReranker rr;
  const auto scores = rr.rerank("a b", {"a b", "z"});
  REQUIRE(scores.size() == 2);
  CHECK(scores[0] == doctest::Approx(1.0));
  CHECK(scores[1] == doctest::Approx(0.0));
  CHECK(scores[0] > scores[1]);
  // |{a,b} ∩ {a,c}| / |{a,b} ∪ {a,c}| = 1/3.
  CHECK(rr.rerank("a b", {"a c"})[0] == doctest::Approx(1.0 / 3.0));
  CHECK(rr.rerank("", {""})[0] == 0.0);
}

TEST_CASE("ledger: zero state, single call totals, per-phase separation") {
  TokenLedger ledger;
  auto snap = ledger.snapshot();
  CHECK(snap.indexing_prompt == 0);
  CHECK(snap.query_calls == 0);

  ledger.add_llm(LedgerPhase::kIndexing, 10, 5);
  ledger.add_llm(LedgerPhase::kQuery, 7, 3);
  ledger.note_query();
  snap = ledger.snapshot();
  CHECK(snap.indexing_prompt == 10);
  CHECK(snap.indexing_completion == 5);
  CHECK(snap.indexing_calls == 1);
  CHECK(snap.query_prompt == 7);
  CHECK(snap.query_completion == 3);
  CHECK(snap.queries == 1);
}

TEST_CASE("ledger: counters conserve token sums under concurrency") {
  TokenLedger ledger;
  parallel_for(64, 8, [&](std::size_t i) {
    ledger.add_llm(LedgerPhase::kIndexing, i, 2 * i);
  });
  const auto snap = ledger.snapshot();
  CHECK(snap.indexing_prompt == 64 * 63 / 2);
  CHECK(snap.indexing_completion == 64 * 63);
  CHECK(snap.indexing_calls == 64);
}

TEST_CASE("cost report: labeled tokenizer and per-query averages") {
  TokenLedger ledger;
  ledger.add_llm(LedgerPhase::kQuery, 10, 4);
  ledger.add_llm(LedgerPhase::kQuery, 20, 6);
  ledger.note_query();
  ledger.note_query();
  const std::string json_text = cost_report_to_json(ledger.snapshot(), "wordpunct");
  const auto j = nlohmann::json::parse(json_text);
  CHECK(j["tokenizer"] == "wordpunct");
  CHECK(j["indexing"]["llm_calls"] == 0);
  CHECK(j["query"]["prompt_tokens"] == 30);
  CHECK(j["query"]["avg_prompt_tokens_per_query"] == doctest::Approx(15.0));
  CHECK(j["query"]["avg_completion_tokens_per_query"] == doctest::Approx(5.0));
}

TEST_CASE("ledgered llm: over-limit prompts are rejected before the call") {
  MockLlm inner(std::map<std::string, std::string>{{"zz zz zz zz", "never"}});
  TokenLedger ledger;
  LedgeredLlm llm(inner, ledger, default_tokenizer(), 3, LedgerPhase::kIndexing);
  CHECK_THROWS_AS(llm.complete("zz zz zz zz", 16), ProviderError);  // 4 tokens > 3
  const auto snap = ledger.snapshot();
  CHECK(snap.indexing_calls == 0);
  CHECK(snap.indexing_prompt == 0);

  const auto ok = llm.complete("zz zz", 16);
  CHECK(ledger.snapshot().indexing_calls == 1);
  CHECK(ledger.snapshot().indexing_prompt == 2);
  CHECK(ledger.snapshot().indexing_completion == default_tokenizer().count(ok.text));
}

TEST_CASE("factory: endpoint dispatch and validation") {
  ProviderConfig cfg;
  cfg.kind = ProviderKind::kLlm;
  cfg.endpoint = "mock";
  CHECK(make_llm(cfg) != nullptr);
  cfg.endpoint = "bogus";
  CHECK_THROWS_AS(make_llm(cfg), ParseError);
  cfg.endpoint = "mock";
  cfg.concurrency_cap = 0;
  CHECK_THROWS_AS(make_llm(cfg), ParseError);

  ProviderConfig rr;
  rr.kind = ProviderKind::kRerank;
  rr.endpoint = "lexical";
  CHECK(make_reranker(rr) != nullptr);

  testing::TempDir tmp;
  const auto canned = tmp.file("llm.json");
  write_file(canned, R"({"responses": {"hi": "there"}})");
  ProviderConfig fix;
  fix.kind = ProviderKind::kLlm;
  fix.endpoint = "fixture:" + canned.string();
  CHECK(make_llm(fix)->complete("hi", 8).text == "there");
}

TEST_CASE("factory: environment variables override endpoints") {
  ProviderConfig cfg;
  cfg.kind = ProviderKind::kEmbed;
  cfg.endpoint = "mock";
  ::setenv("CLUE_EMBED_URL", "http://example.invalid:1", 1);
  CHECK(with_env_override(cfg).endpoint == "http://example.invalid:1");
  ::unsetenv("CLUE_EMBED_URL");
  CHECK(with_env_override(cfg).endpoint == "mock");
}

namespace {

// Local HTTP stub speaking the wire contract; fails the first `fail_first`
// requests with HTTP 500 to exercise the retry path.
class StubServer {
 public:
  explicit StubServer(int fail_first = 0) : fail_first_(fail_first) {
    server_.Post("/complete", [this](const httplib::Request& req, httplib::Response& res) {
      if (!maybe_fail(res)) return;
      const auto j = nlohmann::json::parse(req.body);
      nlohmann::json out{{"text", "echo:" + j["prompt"].get<std::string>()},
                         {"usage", {{"prompt_tokens", 2}, {"completion_tokens", 3}}}};
      res.set_content(out.dump(), "application/json");
    });
    server_.Post("/embed", [this](const httplib::Request& req, httplib::Response& res) {
      if (!maybe_fail(res)) return;
      const auto j = nlohmann::json::parse(req.body);
      nlohmann::json vectors = nlohmann::json::array();
      for (std::size_t i = 0; i < j["texts"].size(); ++i) {
        vectors.push_back({1.0f * static_cast<float>(i), 2.0f});
      }
      res.set_content(nlohmann::json{{"vectors", vectors}}.dump(), "application/json");
    });
    server_.Post("/rerank", [this](const httplib::Request& req, httplib::Response& res) {
      if (!maybe_fail(res)) return;
      const auto j = nlohmann::json::parse(req.body);
      nlohmann::json scores = nlohmann::json::array();
      const std::size_t n = j["passages"].size();
      for (std::size_t i = 0; i < n - (drop_one_score_ ? 1 : 0); ++i) {
        scores.push_back(0.5);
      }
      res.set_content(nlohmann::json{{"scores", scores}}.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~StubServer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int requests_seen() const { return requests_.load(); }
  void drop_one_score() { drop_one_score_ = true; }

 private:
  bool maybe_fail(httplib::Response& res) {
    const int seen = requests_.fetch_add(1);
    if (seen < fail_first_) {
      res.status = 500;
      return false;
    }
    return true;
  }

  httplib::Server server_;
  std::thread thread_;
  std::atomic<int> requests_{0};
  int fail_first_ = 0;
  bool drop_one_score_ = false;
  int port_ = 0;
};

ProviderConfig http_cfg(ProviderKind kind, const std::string& url, int retries) {
  ProviderConfig cfg;
  cfg.kind = kind;
  cfg.endpoint = url;
  cfg.max_retries = retries;
  cfg.backoff_base_ms = 5;
  return cfg;
}

}  // namespace

TEST_CASE("http llm: round trip over the wire contract") {
  StubServer server;
  HttpLlm llm(http_cfg(ProviderKind::kLlm, server.url(), 1));
  const auto res = llm.complete("hello", 32);
  CHECK(res.text == "echo:hello");
  CHECK(res.usage.prompt_tokens == 2);
  CHECK(res.usage.completion_tokens == 3);
}

TEST_CASE("http embed: vectors parsed, count checked") {
  StubServer server;
  HttpEmbedder emb(http_cfg(ProviderKind::kEmbed, server.url(), 1));
  const auto vecs = emb.embed({"a", "b"});
  REQUIRE(vecs.size() == 2);
  CHECK(vecs[1] == Embedding{1.0f, 2.0f});
  CHECK(emb.embed({}).empty());  // no network call for empty input
}

TEST_CASE("http rerank: score-count mismatch is a hard error") {
  StubServer server;
  server.drop_one_score();
  HttpReranker rr(http_cfg(ProviderKind::kRerank, server.url(), 0));
  CHECK_THROWS_AS(rr.rerank("q", {"p1", "p2"}), ProviderError);
}

TEST_CASE("http transport: retries until success within the budget") {
  StubServer server(/*fail_first=*/2);
  HttpLlm llm(http_cfg(ProviderKind::kLlm, server.url(), 3));
  CHECK(llm.complete("x", 8).text == "echo:x");
  CHECK(server.requests_seen() == 3);  // 2 failures + 1 success
}

TEST_CASE("http transport: exhausted retries surface a provider error") {
  StubServer server(/*fail_first=*/100);
  HttpLlm llm(http_cfg(ProviderKind::kLlm, server.url(), 2));
  CHECK_THROWS_AS(llm.complete("x", 8), ProviderError);
  CHECK(server.requests_seen() == 3);  // initial try + 2 retries
}

TEST_CASE("provider profiles parse sections and catch typos") {
  SUBCASE("empty object is the all-mock default") {
    const ProviderProfile p = parse_provider_profile("{}", "p.json");
    CHECK(p.llm.endpoint == "mock");
    CHECK(p.llm.kind == ProviderKind::kLlm);
    CHECK(p.embed.kind == ProviderKind::kEmbed);
    CHECK(p.rerank.kind == ProviderKind::kRerank);
    CHECK(p.llm.token_limit == 8000);
  }

  SUBCASE("sections override only what they name") {
    const ProviderProfile p = parse_provider_profile(
        R"({"llm": {"endpoint": "http://gw:1/llm", "token_limit": 4000, "max_retries": 5},
            "rerank": {"endpoint": "lexical"}})",
        "p.json");
    CHECK(p.llm.endpoint == "http://gw:1/llm");
    CHECK(p.llm.token_limit == 4000);
    CHECK(p.llm.max_retries == 5);
    CHECK(p.llm.model_name == "default");
    CHECK(p.embed.endpoint == "mock");
    CHECK(p.rerank.endpoint == "lexical");
  }

  SUBCASE("unknown keys fail loudly") {
    CHECK_THROWS_WITH_AS(parse_provider_profile(R"({"llms": {}})", "p.json"),
                         "p.json: unknown section \"llms\" (expected llm, embed, rerank)",
                         ParseError);
    CHECK_THROWS_WITH_AS(
        parse_provider_profile(R"({"llm": {"endpont": "mock"}})", "p.json"),
        "p.json: section \"llm\": unknown key \"endpont\"", ParseError);
  }

  SUBCASE("invalid values are rejected with context") {
    CHECK_THROWS_AS(parse_provider_profile("[]", "p.json"), ParseError);
    CHECK_THROWS_AS(parse_provider_profile(R"({"llm": {"max_retries": -1}})", "p.json"),
                    ParseError);
    CHECK_THROWS_AS(parse_provider_profile(R"({"llm": {"concurrency_cap": 0}})", "p.json"),
                    ParseError);
    CHECK_THROWS_AS(parse_provider_profile(R"({"embed": {"endpoint": 7}})", "p.json"),
                    ParseError);
  }

  SUBCASE("profiles load from disk and honor env overrides") {
    cluerag::testing::TempDir tmp;
    write_file(tmp.path() / "p.json", R"({"embed": {"endpoint": "mock"}})");
    ProviderProfile p = load_provider_profile(tmp.path() / "p.json");
    CHECK(p.embed.endpoint == "mock");

    CHECK(!env_overrides_present());
    ::setenv("CLUE_EMBED_URL", "http://emb:9/v1", 1);
    CHECK(env_overrides_present());
    p = with_env_overrides(std::move(p));
    CHECK(p.embed.endpoint == "http://emb:9/v1");
    CHECK(p.llm.endpoint == "mock");  // other sections untouched
    ::unsetenv("CLUE_EMBED_URL");
    CHECK(!env_overrides_present());
  }
}
