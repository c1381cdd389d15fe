#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cluerag/corpus/corpus_io.hpp"
#include "cluerag/error.hpp"
#include "cluerag/eval/benchmark.hpp"
#include "cluerag/extraction/unit_extraction.hpp"
#include "cluerag/graph/build.hpp"
#include "cluerag/graph/persist.hpp"
#include "cluerag/providers/factory.hpp"
#include "cluerag/providers/profile.hpp"
#include "cluerag/providers/token_ledger.hpp"
#include "cluerag/retrieval/answer.hpp"
#include "cluerag/retrieval/query_entities.hpp"
#include "cluerag/retrieval/retrieval.hpp"
#include "cluerag/selection/chunk_selection.hpp"
#include "cluerag/util/jsonl.hpp"

namespace {

using namespace cluerag;
using nlohmann::json;

// Everything a subcommand needs to talk to the three services. The llm
// handle is always the ledgered decorator, so token accounting and the
// prompt budget apply no matter which provider backs it.
struct Bundle {
  ProviderProfile profile;
  bool configured = false;  // a profile file or CLUE_* override was given
  std::unique_ptr<TokenLedger> ledger;
  std::unique_ptr<LlmClient> raw_llm;
  std::unique_ptr<LedgeredLlm> llm;
  std::unique_ptr<Embedder> embedder;
  std::unique_ptr<Reranker> reranker;
};

Bundle make_bundle(const std::string& providers_path, LedgerPhase phase) {
  Bundle b;
  b.configured = !providers_path.empty() || env_overrides_present();
  b.profile = providers_path.empty() ? default_provider_profile()
                                     : load_provider_profile(providers_path);
  b.profile = with_env_overrides(std::move(b.profile));
  b.ledger = std::make_unique<TokenLedger>();
  b.raw_llm = make_llm(b.profile.llm);
  b.llm = std::make_unique<LedgeredLlm>(*b.raw_llm, *b.ledger, default_tokenizer(),
                                        b.profile.llm.token_limit, phase);
  b.embedder = make_embedder(b.profile.embed);
  b.reranker = make_reranker(b.profile.rerank);
  return b;
}

SelectionMetric parse_selection_metric(const std::string& name) {
  if (name == "bleu") {
    return SelectionMetric::kBleu;
  }
  if (name == "cosine") {
    return SelectionMetric::kCosine;
  }
  throw ParseError("unknown selection metric \"" + name + "\" (expected bleu or cosine)");
}

void print_json(const json& j) { std::printf("%s\n", j.dump(2).c_str()); }

struct IndexArgs {
  std::string corpus;
  std::string out;
  std::string format = "jsonl-docs";
  std::string metric = "bleu";
  std::string providers;
  double alpha = 1.0;
  std::size_t chunk_tokens = kDefaultChunkCap;
  std::size_t workers = 4;
};

int run_index(const IndexArgs& a) {
  Bundle b = make_bundle(a.providers, LedgerPhase::kIndexing);
  const std::vector<Chunk> chunks =
      load_corpus(a.corpus, parse_corpus_format(a.format), a.chunk_tokens);

  IndexConfig cfg;
  cfg.alpha = a.alpha;
  cfg.chunk_cap = a.chunk_tokens;
  cfg.selection_metric = parse_selection_metric(a.metric);
  cfg.threads = a.workers;
  IndexProviders providers;
  providers.llm = b.llm.get();
  providers.embedder = b.embedder.get();
  const BuildResult result = build_index_from_chunks(chunks, cfg, providers);

  const std::filesystem::path out(a.out);
  persist_index(result.index, out);
  write_file(out / "extraction-log.jsonl", extraction_log_to_jsonl(result.extraction_log));
  write_file(out / "selection-report.json", selection_report_to_json(result.selection));
  write_file(out / "cost-report.json",
             cost_report_to_json(b.ledger->snapshot(), default_tokenizer().name()));
  for (const auto& w : result.warnings) {
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  }

  json summary = json::parse(stats_to_json(result.index.graph));
  summary["embedding_dim"] = result.index.units.dim();
  summary["out"] = a.out;
  print_json(summary);
  return 0;
}

struct QueryArgs {
  std::string index_dir;
  std::string question;
  std::string providers;
  std::string trace;
  std::size_t k = 3;
  std::size_t depth = 3;
  std::size_t beam = 5;
  std::size_t top_n = 5;
  std::size_t answer_tokens = 512;
  bool answer = false;
  bool llm_entities = false;
};

int run_query(const QueryArgs& a) {
  Bundle b = make_bundle(a.providers, LedgerPhase::kQuery);
  const GraphIndex index = load_index(a.index_dir);

  RetrievalParams params;
  params.k = a.k;
  params.depth = a.depth;
  params.beam = a.beam;
  params.top_n = a.top_n;

  std::optional<LlmQueryEntities> llm_extractor;
  RetrievalProviders rp;
  rp.embedder = b.embedder.get();
  rp.reranker = b.reranker.get();
  if (a.llm_entities) {
    llm_extractor.emplace(*b.llm);
    rp.query_entities = &*llm_extractor;
  }

  std::vector<TraceEvent> sink;
  RetrievalResult result;
  try {
    result = q_iter(a.question, index, params, rp, a.trace.empty() ? nullptr : &sink);
  } catch (...) {
    if (!a.trace.empty()) {
      write_file(a.trace, trace_to_jsonl(sink));  // keep the partial trace
    }
    throw;
  }
  if (!a.trace.empty()) {
    write_file(a.trace, trace_to_jsonl(sink));
  }

  json chunks = json::array();
  std::vector<std::string> texts;
  for (const auto& c : result.chunks) {
    const Chunk& chunk = index.graph.chunk(c.id);
    chunks.push_back({{"id", c.id}, {"score", c.score}, {"text", chunk.text}});
    texts.push_back(chunk.text);
  }
  std::vector<std::string> warnings = result.warnings;

  json out;
  out["question"] = a.question;
  out["anchors"] = result.anchors;
  out["chunks"] = std::move(chunks);
  if (a.answer) {
    AnswerOptions opts;
    opts.completion_max_tokens = a.answer_tokens;
    opts.prompt_token_limit = b.profile.llm.token_limit;
    const AnswerResult ar = generate_answer(a.question, texts, *b.llm, opts);
    out["answer"] = ar.text;
    warnings.insert(warnings.end(), ar.warnings.begin(), ar.warnings.end());
  }
  out["warnings"] = warnings;
  print_json(out);
  return 0;
}

struct EvalArgs {
  std::string index_dir;
  std::string qa;
  std::string out = ".";
  std::string providers;
  std::size_t k = 3;
  std::size_t depth = 3;
  std::size_t beam = 5;
  std::size_t top_n = 5;
  std::size_t workers = 4;
  std::size_t answer_tokens = 512;
  bool drop_articles = false;
};

int run_eval(const EvalArgs& a) {
  Bundle b = make_bundle(a.providers, LedgerPhase::kQuery);
  if (!b.configured) {
    std::fprintf(stderr,
                 "notice: no provider configuration given; running with the mock llm, mock "
                 "embedder, and lexical re-ranker\n");
  }
  const GraphIndex index = load_index(a.index_dir);
  const std::vector<QAItem> items = load_qa_items(a.qa);

  BenchmarkOptions opts;
  opts.retrieval.k = a.k;
  opts.retrieval.depth = a.depth;
  opts.retrieval.beam = a.beam;
  opts.retrieval.top_n = a.top_n;
  opts.answer.completion_max_tokens = a.answer_tokens;
  opts.answer.prompt_token_limit = b.profile.llm.token_limit;
  opts.metrics.drop_articles = a.drop_articles;
  opts.workers = a.workers;

  EvalProviders providers;
  providers.embedder = b.embedder.get();
  providers.reranker = b.reranker.get();
  providers.llm = b.llm.get();
  providers.ledger = b.ledger.get();
  const EvalReport report = run_benchmark(index, items, providers, opts);

  const std::filesystem::path out(a.out);
  std::filesystem::create_directories(out);
  write_file(out / "eval-report.json", eval_report_to_json(report));
  write_file(out / "per-item.jsonl", per_item_jsonl(report));
  write_file(out / "cost-report.json",
             cost_report_to_json(report.cost, default_tokenizer().name()));

  print_json(json{{"evaluated", report.evaluated},
                  {"failed", report.failed},
                  {"mean_accuracy_pct", report.mean_accuracy_pct},
                  {"mean_f1_pct", report.mean_f1_pct},
                  {"out", a.out}});
  return 0;
}

int run_stats(const std::string& index_dir) {
  const GraphIndex index = load_index(index_dir);
  json out = json::parse(stats_to_json(index.graph));
  out["embedding_dim"] = index.units.dim();
  print_json(out);
  return 0;
}

int run_inspect(const std::string& index_dir, const std::string& unit_id,
                const std::string& entity_id, const std::string& chunk_id) {
  const GraphIndex index = load_index(index_dir);
  const MultipartiteGraph& g = index.graph;
  json out;
  if (!unit_id.empty()) {
    const KnowledgeUnit& unit = g.unit(unit_id);
    const Chunk& parent = g.chunk(unit.chunk_id);
    json entities = json::array();
    for (const auto& id : g.entities_of_unit(unit_id)) {
      const Entity& e = g.entity(id);
      entities.push_back(
          {{"id", e.entity_id}, {"surface", e.surface}, {"normalized", e.normalized}});
    }
    out = {{"unit",
            {{"id", unit.unit_id},
             {"chunk_id", unit.chunk_id},
             {"source", to_string(unit.source)},
             {"text", unit.text}}},
           {"chunk", {{"id", parent.id}, {"doc_id", parent.doc_id}, {"text", parent.text}}},
           {"entities", std::move(entities)}};
  } else if (!entity_id.empty()) {
    const Entity& e = g.entity(entity_id);
    json units = json::array();
    for (const auto& id : g.units_of_entity(entity_id)) {
      const KnowledgeUnit& u = g.unit(id);
      units.push_back({{"id", u.unit_id}, {"chunk_id", u.chunk_id}, {"text", u.text}});
    }
    out = {{"entity",
            {{"id", e.entity_id}, {"surface", e.surface}, {"normalized", e.normalized}}},
           {"units", std::move(units)}};
  } else {
    const Chunk& chunk = g.chunk(chunk_id);
    json units = json::array();
    for (const auto& id : g.units_of_chunk(chunk_id)) {
      const KnowledgeUnit& u = g.unit(id);
      json unit_entities = json::array();
      for (const auto& eid : g.entities_of_unit(id)) {
        unit_entities.push_back(eid);
      }
      units.push_back({{"id", u.unit_id},
                       {"source", to_string(u.source)},
                       {"text", u.text},
                       {"entities", std::move(unit_entities)}});
    }
    out = {{"chunk",
            {{"id", chunk.id},
             {"doc_id", chunk.doc_id},
             {"token_len", chunk.token_len},
             {"text", chunk.text}}},
           {"units", std::move(units)}};
  }
  print_json(out);
  return 0;
}

const char* error_kind(const Error& e) {
  if (dynamic_cast<const ParseError*>(&e) != nullptr) {
    return "parse";
  }
  if (dynamic_cast<const IoError*>(&e) != nullptr) {
    return "io";
  }
  if (dynamic_cast<const ProviderError*>(&e) != nullptr) {
    return "provider";
  }
  if (dynamic_cast<const InvariantError*>(&e) != nullptr) {
    return "invariant";
  }
  return "error";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clue-guided retrieval pipeline"};
  app.require_subcommand(1);

  IndexArgs ia;
  CLI::App* index_cmd = app.add_subcommand("index", "build an index directory from a corpus");
  index_cmd->add_option("--corpus", ia.corpus, "corpus JSONL file")
      ->required()
      ->check(CLI::ExistingFile);
  index_cmd->add_option("--out", ia.out, "index output directory")->required();
  index_cmd->add_option("--format", ia.format, "corpus format")
      ->check(CLI::IsMember({"jsonl-docs", "jsonl-chunks"}))
      ->capture_default_str();
  index_cmd->add_option("--alpha", ia.alpha, "token budget coefficient")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  index_cmd->add_option("--chunk-tokens", ia.chunk_tokens, "max tokens per chunk")
      ->capture_default_str();
  index_cmd->add_option("--selection-metric", ia.metric, "chunk relevance metric")
      ->check(CLI::IsMember({"bleu", "cosine"}))
      ->capture_default_str();
  index_cmd->add_option("--providers", ia.providers, "provider profile JSON")
      ->check(CLI::ExistingFile);
  index_cmd->add_option("--workers", ia.workers, "worker threads")->capture_default_str();

  QueryArgs qa;
  CLI::App* query_cmd = app.add_subcommand("query", "retrieve chunks for one question");
  query_cmd->add_option("--index", qa.index_dir, "index directory")->required();
  query_cmd->add_option("--question", qa.question, "the question")->required();
  query_cmd->add_option("--k", qa.k, "units per frontier entity")->capture_default_str();
  query_cmd->add_option("--depth", qa.depth, "traversal depth")->capture_default_str();
  query_cmd->add_option("--beam", qa.beam, "beam width")->capture_default_str();
  query_cmd->add_option("--top-n", qa.top_n, "chunks returned")->capture_default_str();
  query_cmd->add_option("--providers", qa.providers, "provider profile JSON")
      ->check(CLI::ExistingFile);
  query_cmd->add_option("--trace", qa.trace, "write the search trace to this JSONL file");
  query_cmd->add_flag("--answer", qa.answer, "generate an answer from the chunks");
  query_cmd->add_flag("--llm-entities", qa.llm_entities,
                      "extract query entities with the llm instead of the rule ner");
  query_cmd->add_option("--answer-tokens", qa.answer_tokens, "answer completion budget")
      ->capture_default_str();

  EvalArgs ea;
  CLI::App* eval_cmd = app.add_subcommand("eval", "run a qa benchmark against an index");
  eval_cmd->add_option("--index", ea.index_dir, "index directory")->required();
  eval_cmd->add_option("--qa", ea.qa, "qa dataset JSONL")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", ea.out, "report output directory")->capture_default_str();
  eval_cmd->add_option("--k", ea.k, "units per frontier entity")->capture_default_str();
  eval_cmd->add_option("--depth", ea.depth, "traversal depth")->capture_default_str();
  eval_cmd->add_option("--beam", ea.beam, "beam width")->capture_default_str();
  eval_cmd->add_option("--top-n", ea.top_n, "chunks per question")->capture_default_str();
  eval_cmd->add_option("--providers", ea.providers, "provider profile JSON")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--workers", ea.workers, "concurrent questions")->capture_default_str();
  eval_cmd->add_option("--answer-tokens", ea.answer_tokens, "answer completion budget")
      ->capture_default_str();
  eval_cmd->add_flag("--drop-articles", ea.drop_articles,
                     "drop a/an/the before computing metrics");

  std::string stats_dir;
  CLI::App* stats_cmd = app.add_subcommand("stats", "print index statistics");
  stats_cmd->add_option("--index", stats_dir, "index directory")->required();

  std::string inspect_dir;
  std::string inspect_unit;
  std::string inspect_entity;
  std::string inspect_chunk;
  CLI::App* inspect_cmd = app.add_subcommand("inspect", "dump a node and its neighborhood");
  inspect_cmd->add_option("--index", inspect_dir, "index directory")->required();
  CLI::Option_group* target = inspect_cmd->add_option_group("target", "node to inspect");
  target->add_option("--unit", inspect_unit, "unit id");
  target->add_option("--entity", inspect_entity, "entity id");
  target->add_option("--chunk", inspect_chunk, "chunk id");
  target->require_option(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (index_cmd->parsed()) {
      return run_index(ia);
    }
    if (query_cmd->parsed()) {
      return run_query(qa);
    }
    if (eval_cmd->parsed()) {
      return run_eval(ea);
    }
    if (stats_cmd->parsed()) {
      return run_stats(stats_dir);
    }
    if (inspect_cmd->parsed()) {
      return run_inspect(inspect_dir, inspect_unit, inspect_entity, inspect_chunk);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "%s\n",
                 json{{"error", {{"kind", error_kind(e)}, {"message", e.what()}}}}
                     .dump()
                     .c_str());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n",
                 json{{"error", {{"kind", "internal"}, {"message", e.what()}}}}.dump().c_str());
    return 1;
  }
  return 0;
}
