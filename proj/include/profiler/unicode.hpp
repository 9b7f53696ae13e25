#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace profiler::unicode {

// Bytes that do not form valid UTF-8 decode to U+DC80..U+DCFF (one code
// point per byte) and encode back to the original byte, so a decode/encode
// round trip is lossless for arbitrary input.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view cps);
void append(std::string& out, char32_t cp);

bool is_valid_utf8(std::string_view bytes);

bool is_space(char32_t cp);
// Letters (ASCII and the Latin-1/Latin Extended ranges), digits, underscore.
bool is_word(char32_t cp);
bool is_digit(char32_t cp);
bool is_punct(char32_t cp);

char32_t to_lower(char32_t cp);
std::string to_lower(std::string_view utf8);

// Splits on runs of whitespace; no empty pieces.
std::vector<std::u32string> split_whitespace(std::u32string_view text);

}  // namespace profiler::unicode
