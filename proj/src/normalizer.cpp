#include "profiler/normalizer.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "profiler/error.hpp"
#include "profiler/io.hpp"
#include "profiler/unicode.hpp"

namespace profiler::normalizer {

static_assert(sizeof(wchar_t) == sizeof(char32_t),
              "normalizer needs a 32-bit wchar_t");

namespace {

std::wstring to_wide(std::string_view utf8) {
  const std::u32string cps = unicode::decode(utf8);
  return std::wstring(cps.begin(), cps.end());
}

constexpr std::string_view kUrlPattern =
    R"(https?://[^\s\u0085\u00A0\u1680\u2000-\u200A\u2028\u2029\u202F\u205F\u3000]+)";
constexpr std::string_view kMentionPattern =
    R"(@[A-Za-z0-9_\u00C0-\u00D6\u00D8-\u00F6\u00F8-\u024F]+)";
constexpr std::string_view kHashtagPattern =
    R"(#[A-Za-z0-9_\u00C0-\u00D6\u00D8-\u00F6\u00F8-\u024F]+)";

// One output code point: either copied from input position `orig`, or part
// of the rewrite `entry`.
struct Cell {
  int entry = -1;
  size_t orig = 0;
};

struct Entry {
  std::string rule;
  size_t orig_begin = 0;
  size_t orig_end = 0;
};

std::vector<size_t> byte_offsets(const std::u32string& cps) {
  std::vector<size_t> off(cps.size() + 1, 0);
  std::string scratch;
  for (size_t i = 0; i < cps.size(); ++i) {
    scratch.clear();
    unicode::append(scratch, cps[i]);
    off[i + 1] = off[i] + scratch.size();
  }
  return off;
}

}  // namespace

NormalizationRule::NormalizationRule(std::string name, std::string pattern,
                                     std::string replacement)
    : name_(std::move(name)),
      pattern_(std::move(pattern)),
      replacement_(std::move(replacement)),
      wide_replacement_(to_wide(replacement_)) {
  try {
    regex_ = std::make_shared<const std::wregex>(to_wide(pattern_),
                                                 std::regex::ECMAScript |
                                                     std::regex::optimize);
  } catch (const std::regex_error& e) {
    throw ConfigError("normalization rule '" + name_ + "': bad pattern: " + e.what());
  }
}

NormalizationRule url_rule() {
  return {std::string(kUrlRule), std::string(kUrlPattern), "htt"};
}

NormalizationRule mention_rule() {
  return {std::string(kMentionRule), std::string(kMentionPattern), "@us"};
}

NormalizationRule hashtag_rule() {
  return {"hashtags", std::string(kHashtagPattern), "#ht"};
}

RuleSet default_rules(Language) { return {url_rule(), mention_rule()}; }

RuleSet default_rules(std::string_view language_code) {
  return default_rules(parse_language(language_code));
}

NormalizedText normalize(std::string_view text, const RuleSet& rules) {
  const std::u32string input = unicode::decode(text);
  std::wstring cur(input.begin(), input.end());
  std::vector<Cell> cells(cur.size());
  for (size_t i = 0; i < cells.size(); ++i) cells[i] = {-1, i};
  std::vector<Entry> entries;

  for (const auto& rule : rules) {
    const std::wstring& repl = rule.wide_replacement();
    std::wstring next;
    std::vector<Cell> next_cells;
    next.reserve(cur.size());
    next_cells.reserve(cur.size());
    std::unordered_map<int, int> absorbed;  // old entry -> merged entry
    size_t copied = 0;

    auto copy_through = [&](size_t upto) {
      next.append(cur, copied, upto - copied);
      next_cells.insert(next_cells.end(), cells.begin() + copied, cells.begin() + upto);
      copied = upto;
    };

    for (std::wsregex_iterator it(cur.begin(), cur.end(), rule.regex()), end;
         it != end; ++it) {
      const size_t s = static_cast<size_t>(it->position(0));
      const size_t e = s + static_cast<size_t>(it->length(0));
      if (e == s || cur.compare(s, e - s, repl) == 0) continue;
      copy_through(s);

      const int id = static_cast<int>(entries.size());
      Entry merged{rule.name(), std::numeric_limits<size_t>::max(), 0};
      for (size_t p = s; p < e; ++p) {
        const Cell& c = cells[p];
        if (c.entry < 0) {
          merged.orig_begin = std::min(merged.orig_begin, c.orig);
          merged.orig_end = std::max(merged.orig_end, c.orig + 1);
        } else {
          const Entry& old = entries[c.entry];
          merged.orig_begin = std::min(merged.orig_begin, old.orig_begin);
          merged.orig_end = std::max(merged.orig_end, old.orig_end);
          absorbed[c.entry] = id;
        }
      }
      entries.push_back(std::move(merged));
      next.append(repl);
      next_cells.insert(next_cells.end(), repl.size(), Cell{id, 0});
      copied = e;
    }
    copy_through(cur.size());

    // Leftovers of partially covered rewrites join the merged rewrite.
    if (!absorbed.empty()) {
      for (auto& c : next_cells) {
        if (c.entry < 0) continue;
        auto hit = absorbed.find(c.entry);
        if (hit != absorbed.end()) c.entry = hit->second;
      }
    }
    cur = std::move(next);
    cells = std::move(next_cells);
  }

  const std::u32string out_cps(cur.begin(), cur.end());
  NormalizedText result;
  result.text = unicode::encode(out_cps);
  const auto in_off = byte_offsets(input);
  const auto out_off = byte_offsets(out_cps);
  for (size_t p = 0; p < cells.size();) {
    if (cells[p].entry < 0) {
      ++p;
      continue;
    }
    const int id = cells[p].entry;
    size_t q = p;
    while (q < cells.size() && cells[q].entry == id) ++q;
    const Entry& en = entries[id];
    result.rewrites.push_back({en.rule, in_off[en.orig_begin], in_off[en.orig_end],
                               out_off[p], out_off[q]});
    p = q;
  }
  return result;
}

RuleSet parse_rules(std::string_view content, std::string_view source) {
  RuleSet rules;
  const auto lines = io::split_lines(content);
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (io::trim(line).empty() || line[0] == '#') continue;
    const auto f = io::split(line, "\t");
    const std::string where = std::string(source) + ":" + std::to_string(i + 1);
    if (f.size() != 3 || f[0].empty() || f[1].empty())
      throw ConfigError(where + ": expected name<TAB>pattern<TAB>replacement");
    rules.emplace_back(f[0], f[1], f[2]);
    if (std::regex_match(std::wstring(), rules.back().regex()))
      throw ConfigError(where + ": pattern matches the empty string");
  }
  if (rules.empty()) throw ConfigError(std::string(source) + ": no rules");
  for (const auto& r : rules) {
    if (normalize(r.replacement(), rules).text != r.replacement())
      throw ConfigError(std::string(source) + ": replacement of rule '" + r.name() +
                        "' is rewritten by the rule set");
  }
  return rules;
}

RuleSet load_rules(const std::filesystem::path& path) {
  try {
    return parse_rules(io::read_file(path), path.string());
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
}

std::string format_rules(const RuleSet& rules) {
  std::string out;
  for (const auto& r : rules)
    out += r.name() + '\t' + r.pattern() + '\t' + r.replacement() + '\n';
  return out;
}

}  // namespace profiler::normalizer
