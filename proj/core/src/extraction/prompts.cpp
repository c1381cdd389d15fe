#include "cluerag/extraction/prompts.hpp"

namespace cluerag {

namespace {

std::string replace_all(std::string_view text, std::string_view needle,
                        std::string_view replacement) {
  std::string out;
  out.reserve(text.size() + replacement.size());
  std::size_t pos = 0;
  for (;;) {
    const std::size_t hit = text.find(needle, pos);
    if (hit == std::string_view::npos) {
      out.append(text.substr(pos));
      return out;
    }
    out.append(text.substr(pos, hit - pos));
    out.append(replacement);
    pos = hit + needle.size();
  }
}

}  // namespace

const std::string_view kUnitExtractionTemplate =
    R"tpl(Decompose the content into clear knowledge units, ensuring they are interpretable independently of their original context:
1. Sentence Simplification: Break compound sentences into simpler, individual sentences. Whenever possible, retain the original phrasing from the input text.
2. Entity and Description Separation: For named entities that are accompanied by descriptive information, separate the descriptive details into a distinct knowledge unit. Ensure each knowledge unit represents a single, clear fact.
3. Pronoun Resolution: Replace all pronouns (e.g., "it", "they", "this") with explicit references, using full taxonomic names or clear identifiers. Always use "[entity]'s [property]" construction.
4. Output Format: Present the resulting knowledge units as a list of strings, formatted in JSON.

EXAMPLE-1:
Input:
Jesúfas Aranguren. His 13-year professional career was solely associated with Athletic Bilbao, with which he played in nearly 400 official games, winning two Copa del Rey trophies.

Output:
{
    "knowledge units": [
        "Jesús Aranguren had a 13-year professional career.",
        "Jesús Aranguren's professional career was solely associated with Athletic Bilbao.",
        "Athletic Bilbao is a football club.",
        "Jesús Aranguren played for Athletic Bilbao in nearly 400 official games.",
        "Jesús Aranguren won two Copa del Rey trophies with Athletic Bilbao.",
    ]
}

EXAMPLE-2:
Input:
Ophrys apifera. Ophrys apifera grows to a height of 15 -- 50 centimetres (6 -- 20 in). This hardy orchid develops small rosettes of leaves in autumn. They continue to grow slowly during winter. Basal leaves are ovate or oblong - lanceolate, upper leaves and bracts are ovate - lanceolate and sheathing. The plant blooms from mid-April to July producing a spike composed from one to twelve flowers. The flowers have large sepals, with a central green rib and their colour varies from white to pink, while petals are short, pubescent, yellow to greenish. The labellum is trilobed, with two pronounced humps on the hairy lateral lobes, the median lobe is hairy and similar to the abdomen of a bee. It is quite variable in the pattern of coloration, but usually brownish - red with yellow markings. The gynostegium is at right angles, with an elongated apex.

Output:
{
    "knowledge units": [
        "Ophrys apifera grows to a height of 15-50 centimetres (6-20 in)",
        "Ophrys apifera is a hardy orchid",
        "Ophrys apifera develops small rosettes of leaves in autumn",
        "The leaves of Ophrys apifera continue to grow slowly during winter",
        "The basal leaves of Ophrys apifera are ovate or oblong-lanceolate",
        "The upper leaves and bracts of Ophrys apifera are ovate-lanceolate and sheathing",
        "Ophrys apifera blooms from mid-April to July",
        "Ophrys apifera produces a spike composed of one to twelve flowers",
        "The flowers of Ophrys apifera have large sepals with a central green rib",
        "The flowers of Ophrys apifera vary in colour from white to pink",
        "The petals of Ophrys apifera are short, pubescent, and yellow to greenish",
        "The labellum of Ophrys apifera is trilobed with two pronounced humps on the hairy lateral lobes",
        "The median lobe of Ophrys apifera's labellum is hairy and resembles a bee's abdomen",
        "The coloration pattern of Ophrys apifera is variable but usually brownish-red with yellow markings",
        "The gynostegium of Ophrys apifera is at right angles with an elongated apex",
    ]
}

JUST OUTPUT THE RESULTS IN JSON FORMAT!
Input: {passage}
Output:)tpl";

const std::string_view kAnswerTemplate =
    R"tpl(Your goal is to give the best full answer to question the user input according to the given context below.

Given Context: {context}

Give the best full answer to question :{question}

Answer this question in as fewer number of words as possible.)tpl";

const std::string_view kQueryEntityTemplate =
    R"tpl(Extract the named entities mentioned in the question below. Output a JSON object with a single key "entities" whose value is a list of strings.

Question: {question}
Output:)tpl";

std::string render_unit_extraction_prompt(std::string_view passage) {
  return replace_all(kUnitExtractionTemplate, "{passage}", passage);
}

std::string render_answer_prompt(std::string_view context, std::string_view question) {
  std::string out = replace_all(kAnswerTemplate, "{context}", context);
  out = replace_all(out, "{question}", question);
  out.append("\n\n");
  out.append(question);
  return out;
}

std::string render_query_entity_prompt(std::string_view question) {
  return replace_all(kQueryEntityTemplate, "{question}", question);
}

std::filesystem::path source_prompt_dir() {
#ifdef CLUERAG_SOURCE_ASSET_DIR
  return std::filesystem::path(CLUERAG_SOURCE_ASSET_DIR) / "prompts";
#else
  return {};
#endif
}

}  // namespace cluerag
