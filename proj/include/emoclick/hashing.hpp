#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace emoclick {

// FNV-1a over bytes. Used for cache keys and artifact content hashes;
// not a cryptographic hash.
std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t seed = 0xcbf29ce484222325ULL);

// Finalizer from the splitmix64 generator; decorrelates derived streams.
std::uint64_t splitmix64(std::uint64_t x);

std::string to_hex(std::uint64_t value);

// 16-hex-digit content hash of a byte string.
std::string content_hash(std::string_view bytes);

// Content hash of a whole file. Throws IoError if unreadable.
std::string file_content_hash(const std::filesystem::path& path);

}  // namespace emoclick
