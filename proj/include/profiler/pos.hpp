#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "profiler/types.hpp"

namespace profiler::pos {

inline constexpr std::string_view kRefUser = "REF@USERNAME";
inline constexpr std::string_view kRefLink = "REF#LINK";
inline constexpr std::string_view kRefHashtag = "REF#HASHTAG";

// Marker surfaces produced by the normalizer.
inline constexpr std::string_view kMentionSurface = "@us";
inline constexpr std::string_view kLinkSurface = "htt";

// Reduced tags: one uppercase category letter, or one of the REF tags.
using PosStream = std::vector<std::string>;

bool is_ref_tag(std::string_view tag);

// First-level EAGLES category: the first letter, uppercased. REF tags pass
// through. Tags whose first character is not an ASCII letter (punctuation
// tags of other tagsets) reduce to F. Throws DataError on an empty tag.
std::string reduce_tag(std::string_view fine_tag);

// Special surfaces (@us, htt, #word) get their REF tag; everything else
// keeps its reduced tag. Length- and position-preserving.
PosStream relabel(const std::vector<TaggedToken>& tokens);

// One `surface<TAB>fine_tag` per line; a blank line ends a document. A
// trailing blank line does not open an empty document.
std::vector<std::vector<TaggedToken>> parse_tagged(std::string_view content,
                                                   std::string_view source);
std::vector<std::vector<TaggedToken>> ingest_tagged_file(
    const std::filesystem::path& path);
std::string format_tagged(const std::vector<std::vector<TaggedToken>>& docs);

// Lowercase surface -> single-letter category.
using Lexicon = std::unordered_map<std::string, std::string>;

// `word<TAB>letter` per line; blank lines and `#` comments skipped.
Lexicon load_lexicon(const std::filesystem::path& path);

// Baseline tagger: lexicon hit, else numeric -> Z, punctuation -> F,
// otherwise N.
std::vector<TaggedToken> fallback_tag(const std::vector<std::string>& tokens,
                                      const Lexicon& lexicon);

// Whitespace split with leading/trailing punctuation runs peeled into their
// own tokens. Mention/link markers and hashtags stay whole.
std::vector<std::string> tokenize(std::string_view normalized_text);

}  // namespace profiler::pos
