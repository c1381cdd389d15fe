#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cluerag {

// ASCII lowercase; bytes outside [A-Z] pass through untouched.
std::string to_lower(std::string_view s);

// Strips leading and trailing ASCII whitespace.
std::string trim(std::string_view s);

// Replaces every run of ASCII whitespace with a single space and trims the
// ends.
std::string collapse_whitespace(std::string_view s);

// Splits on runs of ASCII whitespace; never yields empty pieces.
std::vector<std::string> split_whitespace(std::string_view s);

// Canonical form used to deduplicate entity mentions: lowercased with
// whitespace collapsed.
std::string normalize_entity(std::string_view mention);

}  // namespace cluerag
