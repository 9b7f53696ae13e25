#include "profiler/pos.hpp"

#include "profiler/error.hpp"
#include "profiler/io.hpp"
#include "profiler/unicode.hpp"

namespace profiler::pos {

namespace {

bool is_hashtag(std::string_view surface) {
  if (surface.size() < 2 || surface[0] != '#') return false;
  const std::u32string rest = unicode::decode(surface.substr(1));
  return !rest.empty() && unicode::is_word(rest[0]);
}

bool all_of_cps(const std::u32string& cps, bool (*pred)(char32_t)) {
  if (cps.empty()) return false;
  for (char32_t c : cps)
    if (!pred(c)) return false;
  return true;
}

bool is_numeric(const std::u32string& cps) {
  bool digit = false;
  for (char32_t c : cps) {
    if (unicode::is_digit(c)) {
      digit = true;
    } else if (c != U'.' && c != U',') {
      return false;
    }
  }
  return digit;
}

}  // namespace

bool is_ref_tag(std::string_view tag) {
  return tag.starts_with("REF@") || tag.starts_with("REF#");
}

std::string reduce_tag(std::string_view fine_tag) {
  if (fine_tag.empty()) throw DataError("empty POS tag");
  if (is_ref_tag(fine_tag)) return std::string(fine_tag);
  const char c = fine_tag[0];
  if (c >= 'a' && c <= 'z') return std::string(1, static_cast<char>(c - 32));
  if (c >= 'A' && c <= 'Z') return std::string(1, c);
  return "F";
}

PosStream relabel(const std::vector<TaggedToken>& tokens) {
  PosStream out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) {
    if (tok.surface == kMentionSurface) {
      out.emplace_back(kRefUser);
    } else if (tok.surface == kLinkSurface) {
      out.emplace_back(kRefLink);
    } else if (is_hashtag(tok.surface)) {
      out.emplace_back(kRefHashtag);
    } else if (tok.fine_tag.empty()) {
      throw DataError("token '" + tok.surface + "' has no POS tag");
    } else {
      out.push_back(reduce_tag(tok.fine_tag));
    }
  }
  return out;
}

std::vector<std::vector<TaggedToken>> parse_tagged(std::string_view content,
                                                   std::string_view source) {
  std::vector<std::vector<TaggedToken>> docs;
  const auto lines = io::split_lines(content);
  std::vector<TaggedToken> current;
  bool open = false;
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) {
      docs.push_back(std::move(current));
      current.clear();
      open = false;
      continue;
    }
    const auto fields = io::split(line, "\t");
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
      throw DataError(std::string(source) + ":" + std::to_string(i + 1) +
                      ": expected surface<TAB>tag");
    current.push_back({fields[0], fields[1]});
    open = true;
  }
  if (open) docs.push_back(std::move(current));
  return docs;
}

std::vector<std::vector<TaggedToken>> ingest_tagged_file(
    const std::filesystem::path& path) {
  return parse_tagged(io::read_file(path), path.string());
}

std::string format_tagged(const std::vector<std::vector<TaggedToken>>& docs) {
  std::string out;
  for (const auto& doc : docs) {
    for (const auto& tok : doc) {
      out += tok.surface;
      out += '\t';
      out += tok.fine_tag;
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  Lexicon lex;
  const auto lines = io::split_lines(io::read_file(path));
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = io::trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    const auto fields = io::split(line, "\t");
    if (fields.size() != 2 || fields[0].empty() || fields[1].size() != 1)
      throw DataError(path.string() + ":" + std::to_string(i + 1) +
                      ": expected word<TAB>letter");
    lex[unicode::to_lower(fields[0])] = reduce_tag(fields[1]);
  }
  return lex;
}

std::vector<TaggedToken> fallback_tag(const std::vector<std::string>& tokens,
                                      const Lexicon& lexicon) {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) {
    const auto hit = lexicon.find(unicode::to_lower(tok));
    std::string tag;
    if (hit != lexicon.end()) {
      tag = hit->second;
    } else {
      const std::u32string cps = unicode::decode(tok);
      if (is_numeric(cps)) {
        tag = "Z";
      } else if (all_of_cps(cps, unicode::is_punct)) {
        tag = "F";
      } else {
        tag = "N";
      }
    }
    out.push_back({tok, std::move(tag)});
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view normalized_text) {
  std::vector<std::string> out;
  const std::u32string text = unicode::decode(normalized_text);
  for (const std::u32string& chunk : unicode::split_whitespace(text)) {
    size_t b = 0;
    size_t e = chunk.size();
    // '@' and '#' introduce markers/hashtags when followed by a word char.
    auto opens_marker = [&](size_t i) {
      return (chunk[i] == U'@' || chunk[i] == U'#') && i + 1 < e &&
             unicode::is_word(chunk[i + 1]);
    };
    while (b < e && unicode::is_punct(chunk[b]) && !opens_marker(b)) ++b;
    while (e > b && unicode::is_punct(chunk[e - 1])) --e;
    if (b > 0) out.push_back(unicode::encode(chunk.substr(0, b)));
    if (e > b) out.push_back(unicode::encode(chunk.substr(b, e - b)));
    if (e < chunk.size() && e >= b) out.push_back(unicode::encode(chunk.substr(e)));
  }
  return out;
}

}  // namespace profiler::pos
