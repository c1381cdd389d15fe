#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace cluerag {

// Versioned prompt templates. The embedded constants are the source of
// truth; the files under core/assets/prompts mirror them byte-for-byte for
// inspection and external tooling, and a test keeps the two in sync.

// Template for decomposing a passage into knowledge units. Placeholder:
// {passage}. The reply is expected as {"knowledge units": [...]}.
extern const std::string_view kUnitExtractionTemplate;
inline constexpr const char* kUnitExtractionAsset = "unit_extraction_v1.txt";

// Template for answer generation. Placeholders: {context}, {question}.
extern const std::string_view kAnswerTemplate;
inline constexpr const char* kAnswerAsset = "answer_generation_v1.txt";

// Template for extracting entity mentions from a query with an LLM.
// Placeholder: {question}. The reply is expected as {"entities": [...]}.
extern const std::string_view kQueryEntityTemplate;
inline constexpr const char* kQueryEntityAsset = "query_entities_v1.txt";

std::string render_unit_extraction_prompt(std::string_view passage);

// Fills the answer template and then repeats the question after it, which
// keeps the task visible after a long context.
std::string render_answer_prompt(std::string_view context, std::string_view question);

std::string render_query_entity_prompt(std::string_view question);

// Location of the prompt asset files in the source tree, for the sync test
// and for tooling that wants the raw files.
std::filesystem::path source_prompt_dir();

}  // namespace cluerag
