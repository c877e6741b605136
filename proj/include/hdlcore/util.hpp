#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hdlcore {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split_lines(std::string_view text); // keeps empty lines, drops \r
std::string collapse_whitespace(std::string_view s);         // runs of whitespace -> one space, trimmed

// True when s contains `word` case-insensitively with non-[A-Za-z0-9_] (or text edge)
// on both sides of the match. `word` may itself contain spaces or punctuation.
bool contains_word(std::string_view s, std::string_view word);

// Stable 64-bit hashing for the deterministic mock backend.
std::uint64_t fnv1a64(std::string_view s);
std::uint64_t splitmix64(std::uint64_t& state);

std::string read_file(const std::filesystem::path& path); // throws Error with path
void write_file(const std::filesystem::path& path, std::string_view content);

// Unique scratch directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& prefix = "hdlcore");
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

} // namespace hdlcore
