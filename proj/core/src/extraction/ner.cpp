#include "cluerag/extraction/ner.hpp"

#include <cctype>
#include <unordered_set>

#include "cluerag/util/text.hpp"

namespace cluerag {

namespace {

bool is_ascii_punct(char c) {
  const unsigned char u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u) != 0;
}

// ASCII uppercase or a Latin-1 supplement uppercase letter (two-byte UTF-8,
// lead 0xC3), which covers accented names like "Álvaro".
bool starts_upper(std::string_view t) {
  if (t.empty()) {
    return false;
  }
  const unsigned char c = static_cast<unsigned char>(t[0]);
  if (c < 0x80) {
    return std::isupper(c) != 0;
  }
  if (c == 0xC3 && t.size() >= 2) {
    const unsigned char d = static_cast<unsigned char>(t[1]);
    return d >= 0x80 && d <= 0x9E && d != 0x97;
  }
  return false;
}

bool all_digits(std::string_view t) {
  if (t.empty()) {
    return false;
  }
  for (const char c : t) {
    if (std::isdigit(static_cast<unsigned char>(c)) == 0) {
      return false;
    }
  }
  return true;
}

bool is_year(std::string_view t) { return t.size() == 4 && all_digits(t); }

// Digit-led spans such as "1970", "1979-80", "1979/80".
bool is_numeric_span(std::string_view t) {
  if (t.empty() || std::isdigit(static_cast<unsigned char>(t[0])) == 0) {
    return false;
  }
  for (const char c : t) {
    if (std::isdigit(static_cast<unsigned char>(c)) == 0 && c != '-' && c != '/') {
      return false;
    }
  }
  return true;
}

bool is_stopword(const std::string& lower) {
  static const std::unordered_set<std::string> kStopwords{
      "a",       "an",      "the",     "and",    "or",      "but",    "nor",
      "so",      "yet",     "if",      "then",   "else",    "when",   "while",
      "where",   "which",   "who",     "whom",   "whose",   "what",   "why",
      "how",     "this",    "that",    "these",  "those",   "it",     "its",
      "he",      "she",     "his",     "her",    "hers",    "him",    "they",
      "them",    "their",   "theirs",  "we",     "us",      "our",    "ours",
      "you",     "your",    "yours",   "i",      "me",      "my",     "mine",
      "in",      "on",      "at",      "of",     "for",     "to",     "with",
      "by",      "from",    "as",      "into",   "onto",    "over",   "under",
      "after",   "before",  "during",  "between", "through", "about",  "against",
      "is",      "are",     "was",     "were",   "be",      "been",   "being",
      "am",      "do",      "does",    "did",    "done",    "has",    "have",
      "had",     "having",  "will",    "would",  "shall",   "should", "can",
      "could",   "may",     "might",   "must",   "not",     "no",     "yes",
      "there",   "here",    "also",    "just",   "only",    "even",   "still",
      "such",    "than",    "too",     "very",   "each",    "every",  "all",
      "any",     "both",    "few",     "many",   "much",    "more",   "most",
      "other",   "some",    "several", "own",    "same",    "another", "one",
      "two",     "three",   "four",    "five",   "six",     "seven",  "eight",
      "nine",    "ten",     "first",   "second", "third",   "however", "although",
      "because", "since",   "until",   "upon",   "whether", "per"};
  return kStopwords.count(lower) != 0;
}

struct StrippedToken {
  std::string text;
  bool cut_before = false;  // leading punctuation removed
  bool cut_after = false;   // trailing punctuation or possessive removed
};

// Strips edge punctuation; a final dot survives when the token has another
// dot inside ("F.C."), and a possessive 's (straight or curly) is removed.
// The cut flags mark mention boundaries: "Cup," ends an entity even though
// the comma itself is dropped.
StrippedToken strip_token(std::string_view raw) {
  StrippedToken out;
  std::size_t b = 0;
  std::size_t e = raw.size();
  while (b < e && is_ascii_punct(raw[b])) {
    ++b;
    out.cut_before = true;
  }
  while (e > b) {
    const char c = raw[e - 1];
    if (!is_ascii_punct(c)) {
      break;
    }
    if (c == '.' && raw.substr(b, e - 1 - b).find('.') != std::string_view::npos) {
      break;
    }
    --e;
    out.cut_after = true;
  }
  std::string t(raw.substr(b, e - b));
  if (t.size() > 2 && t.compare(t.size() - 2, 2, "'s") == 0) {
    t.resize(t.size() - 2);
    out.cut_after = true;
  } else if (t.size() > 4 && t.compare(t.size() - 4, 4, "\xE2\x80\x99s") == 0) {
    t.resize(t.size() - 4);
    out.cut_after = true;
  }
  out.text = std::move(t);
  return out;
}

}  // namespace

std::vector<std::string> RuleBasedNer::extract(const std::string& text) const {
  struct Tok {
    std::string text;
    bool cap = false;
    bool year = false;
  };

  // Qualifying tokens in input order, with run breaks marked by empties.
  std::vector<std::vector<Tok>> runs;
  std::vector<Tok> current;
  const auto flush = [&] {
    if (!current.empty()) {
      runs.push_back(std::move(current));
      current.clear();
    }
  };

  for (const auto& raw : split_whitespace(text)) {
    const StrippedToken st = strip_token(raw);
    if (st.text.empty()) {
      flush();
      continue;
    }
    const bool cap = starts_upper(st.text) && !is_stopword(to_lower(st.text));
    const bool numeric = is_numeric_span(st.text);
    if (!cap && !numeric) {
      flush();
      continue;
    }
    if (st.cut_before) {
      flush();
    }
    current.push_back({st.text, cap, is_year(st.text)});
    if (st.cut_after) {
      flush();
    }
  }
  flush();

  std::vector<std::string> out;
  for (const auto& run : runs) {
    bool has_cap = false;
    for (const auto& tok : run) {
      has_cap = has_cap || tok.cap;
    }
    if (has_cap) {
      std::string joined;
      for (const auto& tok : run) {
        if (!joined.empty()) {
          joined.push_back(' ');
        }
        joined += tok.text;
      }
      out.push_back(std::move(joined));
    } else {
      for (const auto& tok : run) {
        if (tok.year) {
          out.push_back(tok.text);
        }
      }
    }
  }
  return out;
}

const Ner& default_ner() {
  static const RuleBasedNer instance;
  return instance;
}

}  // namespace cluerag
