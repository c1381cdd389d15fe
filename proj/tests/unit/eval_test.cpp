#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "../support/temp.hpp"
#include "../support/toy_index.hpp"
#include "cluerag/error.hpp"
#include "cluerag/eval/benchmark.hpp"
#include "cluerag/eval/metrics.hpp"
#include "cluerag/graph/persist.hpp"
#include "cluerag/providers/local_providers.hpp"
#include "cluerag/util/jsonl.hpp"

using namespace cluerag;
using cluerag::testing::kToyQuery;
using cluerag::testing::make_toy_index;
using cluerag::testing::TempDir;

namespace {

std::filesystem::path data_dir() { return CLUERAG_TEST_DATA_DIR; }

QAItem toy_item(std::string id) {
  QAItem item;
  item.id = std::move(id);
  item.question = kToyQuery;
  item.golden_answers = {"1898 and 1959"};
  return item;
}

EvalProviders toy_providers(Embedder& embedder, Reranker& reranker, LlmClient& llm) {
  EvalProviders p;
  p.embedder = &embedder;
  p.reranker = &reranker;
  p.llm = &llm;
  return p;
}

}  // namespace

TEST_CASE("normalize_answer folds case, punctuation, and whitespace") {
  CHECK(normalize_answer("  The   CAT\tsat. ") == "the cat sat");
  CHECK(normalize_answer("U.S.") == "us");
  CHECK(normalize_answer("!!!") == "");
  CHECK(normalize_answer("") == "");
  // Multibyte sequences pass through; only ASCII letters fold.
  CHECK(normalize_answer("Jesús ARANGUREN") == "jesús aranguren");

  MetricOptions drop;
  drop.drop_articles = true;
  CHECK(normalize_answer("The cat sat", drop) == "cat sat");
  CHECK(normalize_answer("an apple a day", drop) == "apple day");
  CHECK(normalize_answer("the a an", drop) == "");
}

TEST_CASE("accuracy is normalized whole-token containment") {
  CHECK(accuracy({"Paris"}, "The capital is Paris.") == 1);
  CHECK(accuracy({"Paris"}, "London.") == 0);
  CHECK(accuracy({"U.S."}, "the us won") == 1);
  CHECK(accuracy({"1898 and 1959"}, "Forest won the FA Cup in 1898 and 1959.") == 1);

  // Containment is token-aligned: "us" inside "thus" does not count.
  CHECK(accuracy({"us"}, "thus it went") == 0);

  // Any golden answer may match.
  CHECK(accuracy({"London", "Paris"}, "Paris!") == 1);

  // A gold that normalizes away matches only an equally empty generation.
  CHECK(accuracy({"..."}, "anything") == 0);
  CHECK(accuracy({"..."}, "?!") == 1);
}

TEST_CASE("f1 is max-over-golds bag-of-tokens overlap") {
  CHECK(f1({"cat sat"}, "cat sat") == doctest::Approx(1.0));
  CHECK(f1({"cat sat"}, "the cat sat") == doctest::Approx(0.8));
  CHECK(f1({"dog"}, "cat") == doctest::Approx(0.0));
  CHECK(f1({"dog", "cat sat"}, "the cat sat") == doctest::Approx(0.8));

  // Multiset semantics: a repeated gold token needs repeated hits.
  CHECK(f1({"cat cat"}, "cat") == doctest::Approx(2.0 / 3.0));

  // Empty sides per the stated convention.
  CHECK(f1({"..."}, "?!") == doctest::Approx(1.0));
  CHECK(f1({"..."}, "words") == doctest::Approx(0.0));
  CHECK(f1({"words"}, "...") == doctest::Approx(0.0));

  MetricOptions drop;
  drop.drop_articles = true;
  CHECK(f1({"cat sat"}, "the cat sat", drop) == doctest::Approx(1.0));
}

TEST_CASE("f1 is invariant under token reordering of either side") {
  std::mt19937 rng(97);
  const std::vector<std::string> pool{"alpha", "beta", "gamma", "delta", "beta", "the"};
  for (int round = 0; round < 200; ++round) {
    const auto draw = [&] {
      std::string text;
      const std::size_t n = rng() % 6;
      for (std::size_t i = 0; i < n; ++i) {
        if (!text.empty()) {
          text.push_back(' ');
        }
        text += pool[rng() % pool.size()];
      }
      return text;
    };
    const std::string gold = draw();
    std::string gen = draw();
    const double before = f1({gold}, gen);

    auto tokens = [&](const std::string& text) {
      std::vector<std::string> out;
      std::string cur;
      for (const char c : text + " ") {
        if (c == ' ') {
          if (!cur.empty()) {
            out.push_back(cur);
          }
          cur.clear();
        } else {
          cur.push_back(c);
        }
      }
      return out;
    };
    auto shuffled = tokens(gen);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::string joined;
    for (const auto& t : shuffled) {
      if (!joined.empty()) {
        joined.push_back(' ');
      }
      joined += t;
    }
    CHECK(f1({gold}, joined) == before);

    auto gold_shuffled = tokens(gold);
    std::shuffle(gold_shuffled.begin(), gold_shuffled.end(), rng);
    std::string gold_joined;
    for (const auto& t : gold_shuffled) {
      if (!gold_joined.empty()) {
        gold_joined.push_back(' ');
      }
      gold_joined += t;
    }
    CHECK(f1({gold_joined}, gen) == before);
  }
}

TEST_CASE("containment implies token overlap") {
  std::mt19937 rng(31);
  const std::vector<std::string> pool{"a", "an", "the", "cat", "sat!", "U.S.", "won", "1959"};
  int contained = 0;
  for (int round = 0; round < 400; ++round) {
    const auto draw = [&](std::size_t max_len) {
      std::string text;
      const std::size_t n = rng() % (max_len + 1);
      for (std::size_t i = 0; i < n; ++i) {
        if (!text.empty()) {
          text.push_back(' ');
        }
        text += pool[rng() % pool.size()];
      }
      return text;
    };
    const std::string gold = draw(3);
    const std::string gen = draw(6);
    if (accuracy({gold}, gen) == 1) {
      contained += 1;
      CHECK(f1({gold}, gen) > 0.0);
    }
  }
  CHECK(contained > 0);  // the fuzz actually hit the interesting branch
}

TEST_CASE("qa datasets parse and validate") {
  SUBCASE("well-formed lines load with optional supporting ids") {
    const std::string content =
        R"({"id": "q1", "question": "Who won?", "answers": ["Forest"], "supporting": ["c3"]})"
        "\n\n"
        R"({"id": "q2", "question": "Where?", "answers": ["London", "UK"]})"
        "\n";
    const auto items = parse_qa_items(content, "qa.jsonl");
    REQUIRE(items.size() == 2);
    CHECK(items[0].id == "q1");
    CHECK(items[0].golden_answers == std::vector<std::string>{"Forest"});
    CHECK(items[0].supporting == std::vector<std::string>{"c3"});
    CHECK(items[1].golden_answers == std::vector<std::string>{"London", "UK"});
    CHECK(items[1].supporting.empty());
  }

  SUBCASE("malformed rows name the file and line") {
    CHECK_THROWS_WITH_AS(parse_qa_items("not json\n", "qa.jsonl"),
                         "qa.jsonl:1: invalid JSON", ParseError);
    CHECK_THROWS_WITH_AS(
        parse_qa_items(R"({"question": "Who?", "answers": ["x"]})" "\n", "qa.jsonl"),
        "qa.jsonl:1: missing string field \"id\"", ParseError);
    CHECK_THROWS_WITH_AS(
        parse_qa_items(R"({"id": "q1", "question": "Who?", "answers": []})" "\n", "qa.jsonl"),
        "qa.jsonl:1: \"answers\" must be a non-empty array", ParseError);
    CHECK_THROWS_WITH_AS(
        parse_qa_items(R"({"id": "q1", "question": "", "answers": ["x"]})" "\n", "qa.jsonl"),
        "qa.jsonl:1: \"question\" must not be empty", ParseError);
  }

  SUBCASE("duplicate ids are rejected") {
    const std::string content =
        R"({"id": "q1", "question": "A?", "answers": ["a"]})" "\n"
        R"({"id": "q1", "question": "B?", "answers": ["b"]})" "\n";
    CHECK_THROWS_WITH_AS(parse_qa_items(content, "qa.jsonl"),
                         "qa.jsonl:2: duplicate item id \"q1\"", ParseError);
  }
}

TEST_CASE("benchmark answers and scores the toy dataset") {
  const GraphIndex index = make_toy_index();
  FixtureEmbedder embedder(data_dir() / "figure_toy/embed.json");
  FixtureReranker reranker(data_dir() / "figure_toy/rerank.json");
  MockLlm llm;

  BenchmarkOptions opts;
  opts.retrieval.k = 1;
  opts.retrieval.beam = 1;

  SUBCASE("golden answer inside the top chunk scores accuracy 1") {
    TokenLedger ledger;
    LedgeredLlm ledgered(llm, ledger, default_tokenizer(), 8000, LedgerPhase::kQuery);
    EvalProviders providers = toy_providers(embedder, reranker, ledgered);
    providers.ledger = &ledger;

    const EvalReport report = run_benchmark(index, {toy_item("q1")}, providers, opts);
    REQUIRE(report.items.size() == 1);
    const ItemResult& row = report.items[0];
    CHECK(row.error.empty());
    CHECK(row.chunks[0].id == "c3");
    CHECK(row.generated == "Forest won the FA Cup in 1898 and 1959.");
    CHECK(row.accuracy == 1);
    CHECK(row.f1 == doctest::Approx(0.5));
    CHECK(report.evaluated == 1);
    CHECK(report.failed == 0);
    CHECK(report.mean_accuracy_pct == doctest::Approx(100.0));
    CHECK(report.mean_f1_pct == doctest::Approx(50.0));
    CHECK(report.cost.queries == 1);
    CHECK(report.cost.query_calls == 1);
    CHECK(report.cost.query_prompt > 0);
    CHECK(report.cost.indexing_calls == 0);
  }

  SUBCASE("empty dataset gives an empty report with zero aggregates") {
    EvalProviders providers = toy_providers(embedder, reranker, llm);
    const EvalReport report = run_benchmark(index, {}, providers, opts);
    CHECK(report.items.empty());
    CHECK(report.evaluated == 0);
    CHECK(report.failed == 0);
    CHECK(report.mean_accuracy_pct == 0.0);
    CHECK(report.mean_f1_pct == 0.0);
    const auto j = nlohmann::json::parse(eval_report_to_json(report));
    CHECK(j["items"].is_array());
    CHECK(j["items"].empty());
  }

  SUBCASE("provider failure on one item leaves the rest standing") {
    EvalProviders providers = toy_providers(embedder, reranker, llm);
    QAItem broken;
    broken.id = "q0-broken";
    broken.question = "a question the embed fixture does not know";
    broken.golden_answers = {"whatever"};
    const EvalReport report =
        run_benchmark(index, {toy_item("q1"), broken}, providers, opts);
    REQUIRE(report.items.size() == 2);
    CHECK(report.items[0].id == "q0-broken");
    CHECK(report.items[0].error.find("retrieval aborted during entity anchoring") !=
          std::string::npos);
    CHECK(report.items[1].error.empty());
    CHECK(report.evaluated == 1);
    CHECK(report.failed == 1);
    CHECK(report.mean_accuracy_pct == doctest::Approx(100.0));
  }

  SUBCASE("items come back id-sorted and byte-identical for any worker count") {
    EvalProviders providers = toy_providers(embedder, reranker, llm);
    const std::vector<QAItem> items{toy_item("q3"), toy_item("q1"), toy_item("q2")};
    BenchmarkOptions serial = opts;
    serial.workers = 1;
    BenchmarkOptions wide = opts;
    wide.workers = 4;
    const EvalReport a = run_benchmark(index, items, providers, serial);
    const EvalReport b = run_benchmark(index, items, providers, wide);
    REQUIRE(a.items.size() == 3);
    CHECK(a.items[0].id == "q1");
    CHECK(a.items[1].id == "q2");
    CHECK(a.items[2].id == "q3");
    CHECK(eval_report_to_json(a) == eval_report_to_json(b));
    CHECK(per_item_jsonl(a) == per_item_jsonl(b));
  }

  SUBCASE("aggregates re-derive from the per-item lines") {
    EvalProviders providers = toy_providers(embedder, reranker, llm);
    const EvalReport report =
        run_benchmark(index, {toy_item("q1"), toy_item("q2")}, providers, opts);
    double acc = 0.0;
    double f1_sum = 0.0;
    std::size_t rows = 0;
    for_each_jsonl_text(per_item_jsonl(report), "per-item", [&](std::size_t, const std::string& line) {
      const auto j = nlohmann::json::parse(line);
      if (!j["error"].get<std::string>().empty()) {
        return;
      }
      rows += 1;
      acc += j["accuracy"].get<double>();
      f1_sum += j["f1"].get<double>();
    });
    REQUIRE(rows == report.evaluated);
    CHECK(report.mean_accuracy_pct ==
          doctest::Approx(100.0 * acc / static_cast<double>(rows)));
    CHECK(report.mean_f1_pct == doctest::Approx(100.0 * f1_sum / static_cast<double>(rows)));
  }

  SUBCASE("the path overload loads a persisted index and dataset") {
    TempDir tmp;
    persist_index(index, tmp.path() / "index");
    write_file(tmp.path() / "qa.jsonl",
               nlohmann::json{{"id", "q1"},
                              {"question", kToyQuery},
                              {"answers", {"1898 and 1959"}}}
                   .dump() +
               "\n");
    EvalProviders providers = toy_providers(embedder, reranker, llm);
    const EvalReport report =
        run_benchmark(tmp.path() / "index", tmp.path() / "qa.jsonl", providers, opts);
    REQUIRE(report.items.size() == 1);
    CHECK(report.items[0].accuracy == 1);
    CHECK(report.items[0].chunks[0].id == "c3");
  }

  SUBCASE("missing providers are rejected") {
    EvalProviders none;
    CHECK_THROWS_AS(run_benchmark(index, {toy_item("q1")}, none, opts), ParseError);
  }
}
