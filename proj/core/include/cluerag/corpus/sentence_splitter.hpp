#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cluerag {

// Rule-based sentence segmentation. A sentence boundary is a run of terminal
// punctuation (. ! ?) plus any trailing closing quotes or brackets, followed
// by whitespace and then an uppercase letter, digit, or opening quote or
// bracket. A '.' whose preceding word is a known abbreviation (Dr., etc.,
// vs., ...) never ends a sentence. Text after the last boundary is the final
// sentence. Output sentences are trimmed and never whitespace-only.
std::vector<std::string> split_sentences(std::string_view text);

}  // namespace cluerag
