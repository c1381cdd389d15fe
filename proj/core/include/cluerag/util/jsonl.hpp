#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace cluerag {

// Reads a JSON-lines file and invokes `on_line(line_number, raw_line)` for
// every non-blank line. Line numbers are 1-based. Throws IoError if the file
// cannot be opened.
void for_each_jsonl_line(const std::filesystem::path& path,
                         const std::function<void(std::size_t, const std::string&)>& on_line);

// Same protocol over in-memory content; `name` labels error messages when
// the caller parses lines.
void for_each_jsonl_text(const std::string& content, const std::string& name,
                         const std::function<void(std::size_t, const std::string&)>& on_line);

// Reads an entire file into a string. Throws IoError on failure.
std::string read_file(const std::filesystem::path& path);

// Writes a string to a file, replacing any previous content. Throws IoError
// on failure.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace cluerag
