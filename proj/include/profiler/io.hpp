#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace profiler::io {

namespace fs = std::filesystem;

// Reads a whole file; files ending in ".gz" are transparently inflated.
// Throws DataError naming the path on failure.
std::string read_file(const fs::path& path);

// Writes a whole file, creating parent directories; ".gz" paths are
// deflated. Throws DataError.
void write_file(const fs::path& path, std::string_view contents);

// Returns `base` if it exists, else `base.gz` if that exists, else empty.
fs::path resolve_maybe_gz(const fs::path& base);

// Splits on '\n', stripping a trailing '\r'. A final newline does not
// produce an extra empty line.
std::vector<std::string> split_lines(std::string_view text);

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

// Shortest decimal that round-trips to the same double.
std::string format_double(double value);
// Strict parse of a full string as a double; throws DataError.
double parse_double(std::string_view text, std::string_view what);
long long parse_int(std::string_view text, std::string_view what);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, std::string_view sep);

}  // namespace profiler::io
