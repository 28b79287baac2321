#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace emoclick {

using Json = nlohmann::ordered_json;

// Parses one newline-delimited JSON file. Blank lines are skipped; a bad
// line raises ParseError naming its 1-based line number.
std::vector<Json> read_jsonl(const std::filesystem::path& path);

// Streaming variant: stops early when `fn` returns false.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<bool(std::size_t line_no, const Json&)>& fn);

// Writes records one per line with stable key order. Overwrites.
void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& records);

// Appends a single record under an exclusive lock on the stream; used by
// append-only caches that tolerate concurrent writers in one process.
void append_jsonl_record(const std::filesystem::path& path, const Json& record);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace emoclick
