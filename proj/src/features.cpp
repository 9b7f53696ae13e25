#include "profiler/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "profiler/error.hpp"
#include "profiler/io.hpp"
#include "profiler/unicode.hpp"

namespace profiler::features {

namespace {

constexpr std::string_view kVocabMagic = "profiler-vocabulary";
constexpr std::string_view kVocabVersion = "v1";

std::string_view channel_name(Channel c) { return c == Channel::kChar ? "char" : "pos"; }

// Lexicographic compare of unit tuples.
bool units_less(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

FeatureKey FeatureKey::make(Channel channel, std::span<const std::string> units) {
  if (units.empty() || units.size() > kMaxOrder)
    throw InvariantError("feature gram arity must be 1..3");
  FeatureKey key;
  key.channel = channel;
  key.arity = static_cast<std::uint8_t>(units.size());
  for (size_t i = 0; i < units.size(); ++i) {
    if (i > 0) key.gram += kUnitSeparator;
    key.gram += units[i];
  }
  return key;
}

std::vector<std::string> FeatureKey::units() const {
  if (channel == Channel::kPos) return io::split(gram, kUnitSeparator);
  // Char units are single code points at even positions.
  const std::u32string cps = unicode::decode(gram);
  std::vector<std::string> out;
  for (size_t i = 0; i < cps.size(); i += 2) out.push_back(unicode::encode(cps.substr(i, 1)));
  return out;
}

std::string FeatureKey::display() const {
  std::string out;
  for (const auto& u : units()) {
    if (!out.empty()) out += ' ';
    out += u;
  }
  return out;
}

size_t FeatureKeyHash::operator()(const FeatureKey& k) const noexcept {
  return std::hash<std::string>{}(k.gram) * 31 + static_cast<size_t>(k.channel) * 7 +
         k.arity;
}

bool key_less(const FeatureKey& a, const FeatureKey& b) {
  if (a.channel != b.channel) return a.channel < b.channel;
  return units_less(a.units(), b.units());
}

void check_order_range(int n_min, int n_max) {
  if (n_min < 1 || n_max < n_min || n_max > kMaxOrder)
    throw ConfigError("n-gram orders must satisfy 1 <= n_min <= n_max <= 3 (got " +
                      std::to_string(n_min) + ".." + std::to_string(n_max) + ")");
}

void add_char_ngrams(std::string_view text, int n_min, int n_max, NgramBag& bag) {
  check_order_range(n_min, n_max);
  const std::u32string cps = unicode::decode(text);
  std::vector<std::string> padded;
  std::string gram;
  for (const auto& token : unicode::split_whitespace(cps)) {
    padded.clear();
    padded.emplace_back(kPadMark);
    for (char32_t c : token) padded.push_back(unicode::encode(std::u32string(1, c)));
    padded.emplace_back(kPadMark);
    const size_t len = padded.size();
    for (int n = n_min; n <= n_max; ++n) {
      const size_t order = static_cast<size_t>(n);
      if (order > len) break;
      for (size_t start = 0; start + order <= len; ++start) {
        // Positions 0 and len-1 are padding; a window lying wholly inside
        // them is a lone pad unigram.
        if (order == 1 && (start == 0 || start == len - 1)) continue;
        gram.clear();
        for (size_t j = 0; j < order; ++j) {
          if (j > 0) gram += kUnitSeparator;
          gram += padded[start + j];
        }
        ++bag[FeatureKey{Channel::kChar, static_cast<std::uint8_t>(order), gram}];
      }
    }
  }
}

NgramBag char_ngrams(std::string_view text, int n_min, int n_max) {
  NgramBag bag;
  add_char_ngrams(text, n_min, n_max, bag);
  return bag;
}

void add_pos_ngrams(const pos::PosStream& stream, int n_min, int n_max, NgramBag& bag) {
  check_order_range(n_min, n_max);
  for (int n = n_min; n <= n_max; ++n) {
    const size_t order = static_cast<size_t>(n);
    if (order > stream.size()) break;
    for (size_t start = 0; start + order <= stream.size(); ++start) {
      ++bag[FeatureKey::make(Channel::kPos,
                             std::span<const std::string>(stream).subspan(start, order))];
    }
  }
}

NgramBag pos_ngrams(const pos::PosStream& stream, int n_min, int n_max) {
  NgramBag bag;
  add_pos_ngrams(stream, n_min, n_max, bag);
  return bag;
}

Vocabulary Vocabulary::build(std::span<const SampleBags> samples, int min_df) {
  std::vector<const SampleBags*> ptrs;
  ptrs.reserve(samples.size());
  for (const auto& s : samples) ptrs.push_back(&s);
  return build(std::span<const SampleBags* const>(ptrs), min_df);
}

Vocabulary Vocabulary::build(std::span<const SampleBags* const> samples, int min_df) {
  if (min_df < 1) throw ConfigError("min_df must be >= 1");
  if (samples.empty()) throw DataError("cannot build a vocabulary from no samples");
  std::unordered_map<FeatureKey, std::uint32_t, FeatureKeyHash> df;
  for (const SampleBags* s : samples) {
    for (const auto& [key, count] : s->chars) ++df[key];
    for (const auto& [key, count] : s->pos) ++df[key];
  }
  std::vector<std::pair<std::vector<std::string>, FeatureKey>> kept;
  for (const auto& [key, n] : df)
    if (n >= static_cast<std::uint32_t>(min_df)) kept.emplace_back(key.units(), key);
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second.channel != b.second.channel) return a.second.channel < b.second.channel;
    return units_less(a.first, b.first);
  });

  Vocabulary v;
  v.min_df_ = min_df;
  v.keys_.reserve(kept.size());
  for (auto& [units, key] : kept) v.keys_.push_back(std::move(key));
  v.index_keys();
  return v;
}

void Vocabulary::index_keys() {
  index_.clear();
  index_.reserve(keys_.size());
  for (size_t i = 0; i < keys_.size(); ++i)
    index_.emplace(keys_[i], static_cast<std::uint32_t>(i));
  hash_ = io::fnv1a(serialize());
}

size_t Vocabulary::channel_size(Channel c) const {
  return static_cast<size_t>(std::count_if(
      keys_.begin(), keys_.end(), [c](const FeatureKey& k) { return k.channel == c; }));
}

std::optional<std::uint32_t> Vocabulary::find(const FeatureKey& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string Vocabulary::serialize() const {
  std::string out;
  out += kVocabMagic;
  out += '\t';
  out += kVocabVersion;
  out += "\tchar=" + std::to_string(channel_size(Channel::kChar));
  out += "\tpos=" + std::to_string(channel_size(Channel::kPos));
  out += "\tmin_df=" + std::to_string(min_df_) + '\n';
  for (size_t i = 0; i < keys_.size(); ++i) {
    out += channel_name(keys_[i].channel);
    out += '\t';
    out += keys_[i].gram;
    out += '\t';
    out += std::to_string(i);
    out += '\n';
  }
  return out;
}

Vocabulary Vocabulary::parse(std::string_view text) {
  const auto lines = io::split_lines(text);
  if (lines.empty()) throw DataError("vocabulary: empty file");
  const auto header = io::split(lines[0], "\t");
  if (header.size() != 5 || header[0] != kVocabMagic)
    throw DataError("vocabulary: bad header");
  if (header[1] != kVocabVersion)
    throw DataError("vocabulary: unsupported version '" + header[1] + "'");
  auto field = [&](size_t i, std::string_view name) {
    if (!header[i].starts_with(std::string(name) + "="))
      throw DataError("vocabulary: bad header field " + header[i]);
    return io::parse_int(std::string_view(header[i]).substr(name.size() + 1), name);
  };
  const long long n_char = field(2, "char");
  const long long n_pos = field(3, "pos");
  Vocabulary v;
  v.min_df_ = static_cast<int>(field(4, "min_df"));
  if (static_cast<long long>(lines.size()) - 1 != n_char + n_pos)
    throw DataError("vocabulary: expected " + std::to_string(n_char + n_pos) +
                    " keys, found " + std::to_string(lines.size() - 1));
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto f = io::split(lines[i], "\t");
    const std::string where = "vocabulary line " + std::to_string(i + 1);
    if (f.size() != 3) throw DataError(where + ": expected 3 fields");
    FeatureKey key;
    if (f[0] == "char") key.channel = Channel::kChar;
    else if (f[0] == "pos") key.channel = Channel::kPos;
    else throw DataError(where + ": unknown channel '" + f[0] + "'");
    key.gram = f[1];
    const size_t arity = key.channel == Channel::kChar
                             ? (unicode::decode(key.gram).size() + 1) / 2
                             : io::split(key.gram, kUnitSeparator).size();
    if (key.gram.empty() || arity < 1 || arity > kMaxOrder)
      throw DataError(where + ": bad gram");
    key.arity = static_cast<std::uint8_t>(arity);
    if (io::parse_int(f[2], "column") != static_cast<long long>(i - 1))
      throw DataError(where + ": column out of sequence");
    v.keys_.push_back(std::move(key));
  }
  v.index_keys();
  if (static_cast<long long>(v.channel_size(Channel::kChar)) != n_char)
    throw DataError("vocabulary: channel counts disagree with header");
  return v;
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  try {
    return parse(io::read_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void Vocabulary::save(const std::filesystem::path& path) const {
  io::write_file(path, serialize());
}

double SparseVector::dot(std::span<const double> dense) const {
  double s = 0.0;
  for (const auto& [i, v] : entries) s += v * dense[i];
  return s;
}

double SparseVector::squared_norm() const {
  double s = 0.0;
  for (const auto& [i, v] : entries) s += v * v;
  return s;
}

Scale parse_scale(std::string_view name) {
  if (name == "linear") return Scale::kLinear;
  if (name == "log2") return Scale::kLog2;
  throw ConfigError("unknown scale '" + std::string(name) + "' (linear|log2)");
}

std::string_view to_string(Scale s) { return s == Scale::kLinear ? "linear" : "log2"; }

double scale_count(std::uint32_t count, Scale scale) {
  const double c = static_cast<double>(count);
  return scale == Scale::kLinear ? c : std::log2(1.0 + c);
}

ScalingPolicy default_policy(Language language, Task) {
  if (language == Language::kEs) return {Scale::kLinear, Scale::kLog2};
  return {Scale::kLinear, Scale::kLinear};
}

ScalingPolicy default_policy(std::string_view language_code, Task task) {
  return default_policy(parse_language(language_code), task);
}

SparseVector vectorize(const SampleBags& bags, const Vocabulary& vocab,
                       const ScalingPolicy& policy) {
  if (vocab.empty()) throw DataError("cannot vectorize against an empty vocabulary");
  SparseVector out;
  out.dimension = static_cast<std::uint32_t>(vocab.size());
  out.entries.reserve(bags.chars.size() + bags.pos.size());
  auto add = [&](const NgramBag& bag, Scale scale) {
    for (const auto& [key, count] : bag) {
      if (count == 0) continue;
      if (auto col = vocab.find(key)) out.entries.emplace_back(*col, scale_count(count, scale));
    }
  };
  add(bags.chars, policy.char_scale);
  add(bags.pos, policy.pos_scale);
  std::sort(out.entries.begin(), out.entries.end());
  return out;
}

}  // namespace profiler::features
