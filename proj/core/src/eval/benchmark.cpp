#include "cluerag/eval/benchmark.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "cluerag/error.hpp"
#include "cluerag/graph/persist.hpp"
#include "cluerag/util/jsonl.hpp"
#include "cluerag/util/parallel.hpp"

namespace cluerag {

namespace {

using nlohmann::json;

QAItem parse_qa_line(const json& j, const std::string& name, std::size_t line_no) {
  const auto fail = [&](const std::string& why) {
    return ParseError(name + ":" + std::to_string(line_no) + ": " + why);
  };
  if (!j.is_object()) {
    throw fail("expected a JSON object");
  }
  if (!j.contains("id") || !j["id"].is_string()) {
    throw fail("missing string field \"id\"");
  }
  if (!j.contains("question") || !j["question"].is_string()) {
    throw fail("missing string field \"question\"");
  }
  if (!j.contains("answers") || !j["answers"].is_array() || j["answers"].empty()) {
    throw fail("\"answers\" must be a non-empty array");
  }
  QAItem item;
  item.id = j["id"].get<std::string>();
  item.question = j["question"].get<std::string>();
  if (item.question.empty()) {
    throw fail("\"question\" must not be empty");
  }
  for (const auto& a : j["answers"]) {
    if (!a.is_string()) {
      throw fail("\"answers\" entries must be strings");
    }
    item.golden_answers.push_back(a.get<std::string>());
  }
  if (j.contains("supporting")) {
    if (!j["supporting"].is_array()) {
      throw fail("\"supporting\" must be an array");
    }
    for (const auto& s : j["supporting"]) {
      if (!s.is_string()) {
        throw fail("\"supporting\" entries must be strings");
      }
      item.supporting.push_back(s.get<std::string>());
    }
  }
  return item;
}

json item_to_json(const ItemResult& row) {
  json chunks = json::array();
  for (const auto& c : row.chunks) {
    chunks.push_back({{"id", c.id}, {"score", c.score}});
  }
  return json{{"id", row.id},
              {"question", row.question},
              {"generated", row.generated},
              {"chunks", std::move(chunks)},
              {"accuracy", row.accuracy},
              {"f1", row.f1},
              {"error", row.error}};
}

}  // namespace

std::vector<QAItem> parse_qa_items(const std::string& content, const std::string& name) {
  std::vector<QAItem> items;
  std::set<std::string> seen;
  for_each_jsonl_text(content, name, [&](std::size_t line_no, const std::string& line) {
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw ParseError(name + ":" + std::to_string(line_no) + ": invalid JSON");
    }
    QAItem item = parse_qa_line(j, name, line_no);
    if (!seen.insert(item.id).second) {
      throw ParseError(name + ":" + std::to_string(line_no) + ": duplicate item id \"" +
                       item.id + "\"");
    }
    items.push_back(std::move(item));
  });
  return items;
}

std::vector<QAItem> load_qa_items(const std::filesystem::path& path) {
  return parse_qa_items(read_file(path), path.filename().string());
}

EvalReport run_benchmark(const GraphIndex& index, const std::vector<QAItem>& items,
                         const EvalProviders& providers, const BenchmarkOptions& opts) {
  if (providers.embedder == nullptr || providers.reranker == nullptr ||
      providers.llm == nullptr) {
    throw ParseError("benchmark requires embedding, re-rank, and llm providers");
  }

  EvalReport report;
  report.items.resize(items.size());
  parallel_for(items.size(), std::max<std::size_t>(opts.workers, 1), [&](std::size_t i) {
    ItemResult& row = report.items[i];
    row.id = items[i].id;
    row.question = items[i].question;
    if (providers.ledger != nullptr) {
      providers.ledger->note_query();
    }
    try {
      RetrievalProviders rp;
      rp.embedder = providers.embedder;
      rp.reranker = providers.reranker;
      rp.query_entities = providers.query_entities;
      const RetrievalResult retrieved = q_iter(items[i].question, index, opts.retrieval, rp);
      row.chunks = retrieved.chunks;
      std::vector<std::string> texts;
      texts.reserve(retrieved.chunks.size());
      for (const auto& c : retrieved.chunks) {
        texts.push_back(index.graph.chunk(c.id).text);
      }
      const AnswerResult answer =
          generate_answer(items[i].question, texts, *providers.llm, opts.answer);
      row.generated = answer.text;
      row.accuracy = accuracy(items[i].golden_answers, answer.text, opts.metrics);
      row.f1 = f1(items[i].golden_answers, answer.text, opts.metrics);
    } catch (const ProviderError& e) {
      row.error = e.what();
    }
  });

  std::stable_sort(report.items.begin(), report.items.end(),
                   [](const ItemResult& a, const ItemResult& b) { return a.id < b.id; });

  double acc_sum = 0.0;
  double f1_sum = 0.0;
  for (const auto& row : report.items) {
    if (!row.error.empty()) {
      report.failed += 1;
      continue;
    }
    report.evaluated += 1;
    acc_sum += row.accuracy;
    f1_sum += row.f1;
  }
  if (report.evaluated > 0) {
    report.mean_accuracy_pct = 100.0 * acc_sum / static_cast<double>(report.evaluated);
    report.mean_f1_pct = 100.0 * f1_sum / static_cast<double>(report.evaluated);
  }
  if (providers.ledger != nullptr) {
    report.cost = providers.ledger->snapshot();
  }
  return report;
}

EvalReport run_benchmark(const std::filesystem::path& index_dir,
                         const std::filesystem::path& qa_path,
                         const EvalProviders& providers, const BenchmarkOptions& opts) {
  const GraphIndex index = load_index(index_dir);
  return run_benchmark(index, load_qa_items(qa_path), providers, opts);
}

std::string eval_report_to_json(const EvalReport& report) {
  json j;
  j["aggregates"] = {{"evaluated", report.evaluated},
                     {"failed", report.failed},
                     {"mean_accuracy_pct", report.mean_accuracy_pct},
                     {"mean_f1_pct", report.mean_f1_pct}};
  j["cost"] = json::parse(cost_report_to_json(report.cost, default_tokenizer().name()));
  json items = json::array();
  for (const auto& row : report.items) {
    items.push_back(item_to_json(row));
  }
  j["items"] = std::move(items);
  return j.dump(2) + "\n";
}

std::string per_item_jsonl(const EvalReport& report) {
  std::string out;
  for (const auto& row : report.items) {
    out += item_to_json(row).dump();
    out.push_back('\n');
  }
  return out;
}

}  // namespace cluerag
