#include "emoclick/jsonl.hpp"

#include <fstream>
#include <mutex>
#include <sstream>

#include "emoclick/errors.hpp"

namespace emoclick {

namespace {
std::mutex g_append_mutex;

bool is_blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}
}  // namespace

std::vector<Json> read_jsonl(const std::filesystem::path& path) {
    std::vector<Json> records;
    for_each_jsonl(path, [&](std::size_t, const Json& j) {
        records.push_back(j);
        return true;
    });
    return records;
}

void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<bool(std::size_t, const Json&)>& fn) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) {
            continue;
        }
        Json j = Json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw ParseError(path.string() + ": malformed record at line " +
                             std::to_string(line_no));
        }
        if (!fn(line_no, j)) {
            return;
        }
    }
}

void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& records) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    for (const Json& j : records) {
        out << j.dump() << '\n';
    }
}

void append_jsonl_record(const std::filesystem::path& path, const Json& record) {
    std::lock_guard<std::mutex> lock(g_append_mutex);
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::app);
    if (!out) {
        throw IoError("cannot append to " + path.string());
    }
    out << record.dump() << '\n';
    out.flush();
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << content;
}

}  // namespace emoclick
