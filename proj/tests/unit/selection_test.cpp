#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cluerag/corpus/tokenizer.hpp"
#include "cluerag/error.hpp"
#include "cluerag/selection/bleu.hpp"
#include "cluerag/selection/chunk_selection.hpp"
#include "cluerag/selection/knapsack.hpp"
#include "support/oracles.hpp"

using namespace cluerag;

namespace {

std::vector<Chunk> make_chunks(const std::vector<std::string>& texts) {
  std::vector<Chunk> out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    Chunk c;
    c.id = "c" + std::to_string(i);
    c.doc_id = "d";
    c.text = texts[i];
    c.token_len = default_tokenizer().count(texts[i]);
    out.push_back(std::move(c));
  }
  return out;
}

std::string random_text(std::mt19937& rng, int max_words) {
  static const std::vector<std::string> kVocab = {
      "the", "cat", "sat", "on", "mat", "dog", "ran", "fast", "blue", "sky",
      "sun", "rose", "over", "hill", "and", "a",   "bird", "sang"};
  const int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_words));
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += kVocab[rng() % kVocab.size()];
  }
  return out;
}

double oracle_for(const std::string& cand, const std::vector<std::string>& refs, int max_order,
                  double eps = 1e-9) {
  const auto& tok = default_tokenizer();
  std::vector<std::vector<std::string>> ref_tokens;
  for (const auto& r : refs) {
    ref_tokens.push_back(token_texts(tok, r));
  }
  return testing::oracle_bleu(token_texts(tok, cand), ref_tokens, max_order, eps);
}

}  // namespace

TEST_CASE("bleu: candidate equal to its reference scores 1.0") {
  CHECK(bleu_score("the cat sat on the mat", {"the cat sat on the mat"}) == 1.0);
  CHECK(bleu_score("a b", {"a b"}) == 1.0);  // shorter than max_order
  CHECK(bleu_score("word", {"word"}) == 1.0);
}

TEST_CASE("bleu: clipped unigram precision on repeated tokens") {
  BleuOptions opts;
  opts.max_order = 1;
  const double got = bleu_score("the the the", {"the cat"}, opts);
  CHECK(got == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(got == oracle_for("the the the", {"the cat"}, 1));
}

TEST_CASE("bleu: disjoint vocabulary collapses to the epsilon floor") {
  const double got = bleu_score("alpha beta", {"gamma delta"});
  CHECK(got < 1e-6);
  CHECK(got > 0.0);
  BleuOptions none;
  none.smoothing = BleuSmoothing::kNone;
  CHECK(bleu_score("alpha beta", {"gamma delta"}, none) == 0.0);
}

TEST_CASE("bleu: empty candidate scores 0, empty references throw") {
  CHECK(bleu_score("", {"ref"}) == 0.0);
  CHECK(bleu_score("   ", {"ref"}) == 0.0);
  CHECK_THROWS_AS(bleu_score("x", {}), ParseError);
}

TEST_CASE("bleu: brevity penalty against the closest reference") {
  // Candidate 2 tokens, reference 3: precisions are 1, BP = exp(1 - 3/2).
  const double got = bleu_score("the cat", {"the cat sat"});
  CHECK(got == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  // Two references, lengths 3 and 2; the tie rule never fires here, the
  // 2-token reference is strictly closer, so BP = 1.
  const double with_close = bleu_score("the cat", {"the cat sat", "the cat"});
  CHECK(with_close == 1.0);
}

TEST_CASE("bleu: reference order never changes the score") {
  std::mt19937 rng(11);
  for (int iter = 0; iter < 30; ++iter) {
    const std::string cand = random_text(rng, 12);
    std::vector<std::string> refs;
    for (int r = 0; r < 4; ++r) {
      refs.push_back(random_text(rng, 12));
    }
    const double base = bleu_score(cand, refs);
    std::shuffle(refs.begin(), refs.end(), rng);
    CHECK(bleu_score(cand, refs) == base);
  }
}

TEST_CASE("bleu: pairwise scorer agrees with the naive oracle on random inputs") {
  std::mt19937 rng(23);
  for (int iter = 0; iter < 60; ++iter) {
    const std::string cand = random_text(rng, 15);
    std::vector<std::string> refs;
    const int nr = 1 + static_cast<int>(rng() % 4);
    for (int r = 0; r < nr; ++r) {
      refs.push_back(random_text(rng, 15));
    }
    CHECK(bleu_score(cand, refs) == oracle_for(cand, refs, 4));
  }
}

TEST_CASE("corpus scores: identical chunks score 1.0 each") {
  const auto chunks = make_chunks({"same text here", "same text here"});
  const auto scores = corpus_bleu_scores(chunks);
  REQUIRE(scores.size() == 2);
  CHECK(scores[0] == 1.0);
  CHECK(scores[1] == 1.0);
}

TEST_CASE("corpus scores: disjoint chunks score near zero") {
  const auto chunks = make_chunks({"alpha beta gamma", "delta epsilon zeta"});
  for (const double s : corpus_bleu_scores(chunks)) {
    CHECK(s < 1e-6);
  }
}

TEST_CASE("corpus scores: single chunk scores zero") {
  CHECK(corpus_bleu_scores(make_chunks({"only one"})) == std::vector<double>{0.0});
}

TEST_CASE("corpus scores: accelerated index matches pairwise scoring exactly") {
  std::mt19937 rng(31);
  for (int iter = 0; iter < 8; ++iter) {
    std::vector<std::string> texts;
    const int n = 2 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i) {
      texts.push_back(random_text(rng, 20));
    }
    const auto chunks = make_chunks(texts);
    const auto fast = corpus_bleu_scores(chunks);
    REQUIRE(fast.size() == chunks.size());
    for (std::size_t i = 0; i < chunks.size(); ++i) {
      std::vector<std::string> refs;
      for (std::size_t j = 0; j < chunks.size(); ++j) {
        if (j != i) refs.push_back(chunks[j].text);
      }
      CHECK(fast[i] == bleu_score(chunks[i].text, refs));
      CHECK(fast[i] == oracle_for(chunks[i].text, refs, 4));
    }
  }
}

TEST_CASE("knapsack: three-item example picks the first two") {
  const std::vector<KnapsackItem> items = {
      {"a", 2, 0.3}, {"b", 3, 0.4}, {"c", 4, 0.5}};
  const auto res = knapsack_select(items, 5, SolverMode::kExact);
  CHECK(res.selected == std::vector<std::string>{"a", "b"});
  CHECK(res.total_weight == 5);
  CHECK(res.total_value == doctest::Approx(0.7));
  CHECK(res.mode == "exact");
}

TEST_CASE("knapsack: zero budget selects nothing") {
  const std::vector<KnapsackItem> items = {{"a", 2, 0.3}, {"b", 1, 0.9}};
  CHECK(knapsack_select(items, 0).selected.empty());
}

TEST_CASE("knapsack: slack budget selects everything, even zero-value items") {
  const std::vector<KnapsackItem> items = {{"a", 2, 0.0}, {"b", 3, 0.4}, {"c", 4, 0.5}};
  const auto res = knapsack_select(items, 9);
  CHECK(res.selected == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("knapsack: ties resolve to the lexicographically smallest id set") {
  const std::vector<KnapsackItem> items = {
      {"b", 1, 0.5}, {"a", 1, 0.5}, {"c", 2, 0.5}};
  const auto res = knapsack_select(items, 1, SolverMode::kExact);
  CHECK(res.selected == std::vector<std::string>{"a"});
}

TEST_CASE("knapsack: zero-value items are not dragged into tight solutions") {
  const std::vector<KnapsackItem> items = {{"a", 2, 0.0}, {"b", 3, 0.2}};
  const auto res = knapsack_select(items, 4, SolverMode::kExact);
  CHECK(res.selected == std::vector<std::string>{"b"});
}

TEST_CASE("knapsack: exact mode matches subset enumeration on random instances") {
  std::mt19937 rng(47);
  for (int iter = 0; iter < 40; ++iter) {
    const std::size_t n = 1 + rng() % 12;
    std::vector<KnapsackItem> items;
    std::vector<std::size_t> weights;
    std::vector<std::int64_t> scaled;
    std::size_t w_total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t w = 1 + rng() % 15;
      const double v = static_cast<double>(rng() % 10001) / 10000.0;
      items.push_back({"i" + std::to_string(i), w, v});
      weights.push_back(w);
      scaled.push_back(scale_value(v));
      w_total += w;
    }
    const std::size_t budget = rng() % (w_total + 2);
    const auto res = knapsack_select(items, budget, SolverMode::kExact);
    std::int64_t got = 0;
    std::size_t got_w = 0;
    for (const auto& id : res.selected) {
      for (const auto& item : items) {
        if (item.id == id) {
          got += scale_value(item.value);
          got_w += item.weight;
        }
      }
    }
    CHECK(got_w <= budget);
    CHECK(got == testing::oracle_knapsack_best(weights, scaled, budget));
  }
}

TEST_CASE("knapsack: greedy mode is within half of the optimum") {
  std::mt19937 rng(53);
  for (int iter = 0; iter < 40; ++iter) {
    const std::size_t n = 1 + rng() % 12;
    std::vector<KnapsackItem> items;
    std::vector<std::size_t> weights;
    std::vector<std::int64_t> scaled;
    std::size_t w_total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t w = 1 + rng() % 15;
      const double v = static_cast<double>(rng() % 10001) / 10000.0;
      items.push_back({"i" + std::to_string(i), w, v});
      weights.push_back(w);
      scaled.push_back(scale_value(v));
      w_total += w;
    }
    const std::size_t budget = rng() % (w_total + 2);
    const auto res = knapsack_select(items, budget, SolverMode::kGreedy);
    const auto best = testing::oracle_knapsack_best(weights, scaled, budget);
    std::int64_t got = 0;
    for (const auto& id : res.selected) {
      for (const auto& item : items) {
        if (item.id == id) got += scale_value(item.value);
      }
    }
    CHECK(2 * got >= best);
  }
}

TEST_CASE("budget: ceil semantics with float guard") {
  CHECK(make_budget(0.0, 100).w_max == 0);
  CHECK(make_budget(1.0, 9).w_max == 9);
  CHECK(make_budget(0.5, 9).w_max == 5);
  CHECK(make_budget(0.25, 8).w_max == 2);
  CHECK(make_budget(0.1, 30).w_max == 3);
  CHECK(make_budget(0.001, 1).w_max == 1);
  CHECK_THROWS_AS(make_budget(1.5, 10), ParseError);
  CHECK_THROWS_AS(make_budget(-0.1, 10), ParseError);
}

TEST_CASE("value scaling: positive values never collapse to zero") {
  CHECK(scale_value(0.0) == 0);
  CHECK(scale_value(1e-9) == 1);
  CHECK(scale_value(0.5) == 5000);
  CHECK(scale_value(1.0) == 10000);
}

TEST_CASE("chunk_selection: alpha extremes") {
  std::mt19937 rng(61);
  std::vector<std::string> texts;
  for (int i = 0; i < 12; ++i) {
    texts.push_back(random_text(rng, 18));
  }
  const auto chunks = make_chunks(texts);
  const auto none = chunk_selection(chunks, 0.0);
  CHECK(none.selected_ids.empty());
  const auto all = chunk_selection(chunks, 1.0);
  CHECK(all.selected_ids.size() == chunks.size());
}

TEST_CASE("chunk_selection: budget law and value monotonicity over the alpha grid") {
  std::mt19937 rng(67);
  std::vector<std::string> texts;
  for (int i = 0; i < 15; ++i) {
    texts.push_back(random_text(rng, 15));
  }
  const auto chunks = make_chunks(texts);
  double prev_value = -1.0;
  for (const double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto res = chunk_selection(chunks, alpha);
    std::size_t total = 0;
    double value = 0.0;
    for (const auto& row : res.report.rows) {
      if (row.selected) {
        total += row.weight;
        value += row.value;
      }
    }
    CHECK(total <= res.report.w_max);
    CHECK(value >= prev_value - 1e-12);
    prev_value = value;
  }
}

TEST_CASE("chunk_selection: report carries every chunk once, with budget fields") {
  const auto chunks = make_chunks({"the cat sat", "the dog ran", "a bird sang"});
  const auto res = chunk_selection(chunks, 0.5);
  REQUIRE(res.report.rows.size() == 3);
  CHECK(res.report.rows[0].chunk_id == "c0");
  CHECK(res.report.alpha == 0.5);
  CHECK(res.report.w_total == chunks[0].token_len + chunks[1].token_len + chunks[2].token_len);
  CHECK(res.report.solver_mode == "exact");
  CHECK(res.report.metric == "bleu");
  std::size_t flagged = 0;
  for (const auto& row : res.report.rows) {
    if (row.selected) ++flagged;
  }
  CHECK(flagged == res.selected_ids.size());
}

TEST_CASE("chunk_selection: report JSON is byte-stable") {
  const auto chunks = make_chunks({"the cat sat", "the dog ran"});
  const auto a = selection_report_to_json(chunk_selection(chunks, 0.5).report);
  const auto b = selection_report_to_json(chunk_selection(chunks, 0.5).report);
  CHECK(a == b);
  CHECK(a.find("\"W_total\"") != std::string::npos);
  CHECK(a.find("\"solver_mode\"") != std::string::npos);
}

TEST_CASE("chunk_selection: single chunk warns and selects by budget") {
  const auto chunks = make_chunks({"an only chunk"});
  const auto res = chunk_selection(chunks, 1.0);
  REQUIRE(res.report.warnings.size() == 1);
  CHECK(res.selected_ids == std::vector<std::string>{"c0"});  // slack budget
  CHECK(chunk_selection(chunks, 0.0).selected_ids.empty());
}

TEST_CASE("score_chunks: cosine metric uses pairwise maxima, clamped to [0, 1]") {
  const auto chunks = make_chunks({"first", "second", "third"});
  SelectionOptions opts;
  opts.metric = SelectionMetric::kCosine;
  opts.embed = [](const std::vector<std::string>& texts) {
    std::vector<Embedding> out;
    for (const auto& t : texts) {
      if (t == "first") out.push_back({1.0f, 0.0f});
      else if (t == "second") out.push_back({1.0f, 0.0f});
      else out.push_back({-1.0f, 0.0f});
    }
    return out;
  };
  const auto scores = score_chunks(chunks, opts);
  REQUIRE(scores.size() == 3);
  CHECK(scores[0].value == doctest::Approx(1.0));
  CHECK(scores[1].value == doctest::Approx(1.0));
  CHECK(scores[2].value == 0.0);  // cosine -1 clamps to 0
  SelectionOptions missing;
  missing.metric = SelectionMetric::kCosine;
  CHECK_THROWS_AS(score_chunks(chunks, missing), ParseError);
}
