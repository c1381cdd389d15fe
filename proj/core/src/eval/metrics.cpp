#include "cluerag/eval/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace cluerag {

namespace {

bool is_article(const std::string& token) {
  return token == "a" || token == "an" || token == "the";
}

std::vector<std::string> split_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    out.push_back(token);
  }
  return out;
}

double pair_f1(const std::vector<std::string>& gold_tokens,
               const std::vector<std::string>& gen_tokens) {
  if (gold_tokens.empty() && gen_tokens.empty()) {
    return 1.0;
  }
  if (gold_tokens.empty() || gen_tokens.empty()) {
    return 0.0;
  }
  std::map<std::string, std::size_t> budget;
  for (const auto& t : gold_tokens) {
    budget[t] += 1;
  }
  std::size_t overlap = 0;
  for (const auto& t : gen_tokens) {
    const auto it = budget.find(t);
    if (it != budget.end() && it->second > 0) {
      it->second -= 1;
      overlap += 1;
    }
  }
  if (overlap == 0) {
    return 0.0;
  }
  const double precision = static_cast<double>(overlap) / static_cast<double>(gen_tokens.size());
  const double recall = static_cast<double>(overlap) / static_cast<double>(gold_tokens.size());
  return 2.0 * precision * recall / (precision + recall);
}

}  // namespace

std::string normalize_answer(const std::string& text, const MetricOptions& opts) {
  std::string flat;
  flat.reserve(text.size());
  for (const char raw : text) {
    const unsigned char c = static_cast<unsigned char>(raw);
    if (c < 0x80 && std::isspace(c)) {
      if (!flat.empty() && flat.back() != ' ') {
        flat.push_back(' ');
      }
    } else if (c < 0x80 && std::ispunct(c)) {
      // Deleted, so "U.S." and "us" normalize identically.
    } else if (c < 0x80) {
      flat.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flat.push_back(raw);  // multibyte sequences pass through untouched
    }
  }
  if (!flat.empty() && flat.back() == ' ') {
    flat.pop_back();
  }
  if (!opts.drop_articles) {
    return flat;
  }
  std::string kept;
  for (const auto& token : split_tokens(flat)) {
    if (is_article(token)) {
      continue;
    }
    if (!kept.empty()) {
      kept.push_back(' ');
    }
    kept += token;
  }
  return kept;
}

int accuracy(const std::vector<std::string>& gold, const std::string& generated,
             const MetricOptions& opts) {
  const std::string gen = normalize_answer(generated, opts);
  const std::string padded = " " + gen + " ";
  for (const auto& answer : gold) {
    const std::string g = normalize_answer(answer, opts);
    if (g.empty() ? gen.empty() : padded.find(" " + g + " ") != std::string::npos) {
      return 1;
    }
  }
  return 0;
}

double f1(const std::vector<std::string>& gold, const std::string& generated,
          const MetricOptions& opts) {
  const std::vector<std::string> gen_tokens = split_tokens(normalize_answer(generated, opts));
  double best = 0.0;
  for (const auto& answer : gold) {
    best = std::max(best, pair_f1(split_tokens(normalize_answer(answer, opts)), gen_tokens));
  }
  return best;
}

}  // namespace cluerag
