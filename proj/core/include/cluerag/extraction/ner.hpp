#pragma once

#include <string>
#include <vector>

namespace cluerag {

// Named-entity mention extractor. Implementations return surface forms in
// order of appearance; duplicates are the caller's problem.
class Ner {
 public:
  virtual ~Ner() = default;
  virtual std::vector<std::string> extract(const std::string& text) const = 0;
};

// Deterministic recognizer: maximal runs of capitalized tokens (capitalized
// stopwords such as sentence-initial "The" are skipped), with numeric spans
// like "1979-80" absorbed into an adjacent run, plus standalone four-digit
// years. Dotted abbreviations keep their final dot ("F.C."), possessive 's
// is stripped.
class RuleBasedNer final : public Ner {
 public:
  std::vector<std::string> extract(const std::string& text) const override;
};

const Ner& default_ner();

}  // namespace cluerag
