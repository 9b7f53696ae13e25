#pragma once

#include <filesystem>
#include <memory>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "profiler/types.hpp"

namespace profiler::normalizer {

// A literal rewrite applied to every match of `pattern`.
//
// Patterns are ECMAScript regular expressions matched over Unicode code
// points; `\uXXXX` escapes name code points. Matching is leftmost with greedy
// quantifiers, so for the shipped patterns every match is maximal. Empty
// matches are ignored.
class NormalizationRule {
 public:
  // Throws ConfigError if the pattern does not compile.
  NormalizationRule(std::string name, std::string pattern, std::string replacement);

  const std::string& name() const { return name_; }
  const std::string& pattern() const { return pattern_; }
  const std::string& replacement() const { return replacement_; }
  const std::wregex& regex() const { return *regex_; }
  const std::wstring& wide_replacement() const { return wide_replacement_; }

 private:
  std::string name_;
  std::string pattern_;
  std::string replacement_;
  std::wstring wide_replacement_;
  std::shared_ptr<const std::wregex> regex_;
};

using RuleSet = std::vector<NormalizationRule>;

// Byte offsets; `original_*` index the input, `output_*` the result.
struct Rewrite {
  std::string rule;
  size_t original_begin = 0;
  size_t original_end = 0;
  size_t output_begin = 0;
  size_t output_end = 0;
};

struct NormalizedText {
  std::string text;
  std::vector<Rewrite> rewrites;
};

inline constexpr std::string_view kUrlRule = "urls";
inline constexpr std::string_view kMentionRule = "mentions";

NormalizationRule url_rule();
NormalizationRule mention_rule();
NormalizationRule hashtag_rule();

// [urls, mentions] for every supported language.
RuleSet default_rules(Language language);
RuleSet default_rules(std::string_view language_code);

// Rules applied in order, one left-to-right scan each. A match whose text
// already equals the replacement is left alone and not logged. When a later
// rule's match covers text produced by an earlier rewrite, the two merge
// into a single logged rewrite under the later rule.
NormalizedText normalize(std::string_view text, const RuleSet& rules);

// Rule file: one `name<TAB>pattern<TAB>replacement` per line; blank lines
// and lines starting with '#' are skipped. Every replacement must be a fixed
// point of the whole rule set. Throws ConfigError.
RuleSet load_rules(const std::filesystem::path& path);
RuleSet parse_rules(std::string_view content, std::string_view source);
std::string format_rules(const RuleSet& rules);

}  // namespace profiler::normalizer
