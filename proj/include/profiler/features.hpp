#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "profiler/pos.hpp"
#include "profiler/types.hpp"

namespace profiler::features {

enum class Channel : std::uint8_t { kChar = 0, kPos = 1 };

inline constexpr std::string_view kPadMark = "_";
// U+241F SYMBOL FOR UNIT SEPARATOR, joins the units of a gram.
inline constexpr std::string_view kUnitSeparator = "\xE2\x90\x9F";

inline constexpr int kMaxOrder = 3;

// An n-gram of 1..3 units on one channel. Units are stored joined by
// kUnitSeparator; char units are single code points, so the join is
// injective on both channels.
struct FeatureKey {
  Channel channel = Channel::kChar;
  std::uint8_t arity = 0;
  std::string gram;

  static FeatureKey make(Channel channel, std::span<const std::string> units);
  std::vector<std::string> units() const;
  // Units joined by single spaces, for display.
  std::string display() const;

  bool operator==(const FeatureKey&) const = default;
};

struct FeatureKeyHash {
  size_t operator()(const FeatureKey& k) const noexcept;
};

// Channel first, then lexicographic over the unit tuple.
bool key_less(const FeatureKey& a, const FeatureKey& b);

// Multiset of grams.
using NgramBag = std::unordered_map<FeatureKey, std::uint32_t, FeatureKeyHash>;

// Throws ConfigError unless 1 <= n_min <= n_max <= 3.
void check_order_range(int n_min, int n_max);

// Whitespace tokens, each padded with one `_` per side; every window of
// each order except those made only of padding.
NgramBag char_ngrams(std::string_view text, int n_min, int n_max);
void add_char_ngrams(std::string_view text, int n_min, int n_max, NgramBag& bag);

// Unpadded tag windows.
NgramBag pos_ngrams(const pos::PosStream& stream, int n_min, int n_max);
void add_pos_ngrams(const pos::PosStream& stream, int n_min, int n_max, NgramBag& bag);

// Gram multisets of one sample, summed over its documents.
struct SampleBags {
  NgramBag chars;
  NgramBag pos;
};

class Vocabulary {
 public:
  Vocabulary() = default;

  // Keys present in at least `min_df` distinct samples. Throws DataError on
  // an empty sample list, ConfigError on min_df < 1.
  static Vocabulary build(std::span<const SampleBags> samples, int min_df);
  static Vocabulary build(std::span<const SampleBags* const> samples, int min_df);

  static Vocabulary parse(std::string_view text);
  static Vocabulary load(const std::filesystem::path& path);
  std::string serialize() const;
  void save(const std::filesystem::path& path) const;

  size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }
  int min_df() const { return min_df_; }
  size_t channel_size(Channel c) const;
  const FeatureKey& key(std::uint32_t column) const { return keys_.at(column); }
  const std::vector<FeatureKey>& keys() const { return keys_; }
  std::optional<std::uint32_t> find(const FeatureKey& key) const;
  // FNV-1a of the serialized form.
  std::uint64_t hash() const { return hash_; }

 private:
  void index_keys();

  std::vector<FeatureKey> keys_;
  std::unordered_map<FeatureKey, std::uint32_t, FeatureKeyHash> index_;
  int min_df_ = 1;
  std::uint64_t hash_ = 0;
};

// Sorted by column, strictly positive values.
struct SparseVector {
  std::vector<std::pair<std::uint32_t, double>> entries;
  std::uint32_t dimension = 0;

  double dot(std::span<const double> dense) const;
  double squared_norm() const;
};

enum class Scale { kLinear, kLog2 };

struct ScalingPolicy {
  Scale char_scale = Scale::kLinear;
  Scale pos_scale = Scale::kLinear;

  bool operator==(const ScalingPolicy&) const = default;
};

Scale parse_scale(std::string_view name);
std::string_view to_string(Scale s);

double scale_count(std::uint32_t count, Scale scale);

// Linear for both channels, except log2 POS scaling for Spanish.
ScalingPolicy default_policy(Language language, Task task = Task::kGender);
ScalingPolicy default_policy(std::string_view language_code, Task task = Task::kGender);

// Drops out-of-vocabulary grams; counts scaled per channel; no length
// normalization. Throws DataError on an empty vocabulary.
SparseVector vectorize(const SampleBags& bags, const Vocabulary& vocab,
                       const ScalingPolicy& policy);

}  // namespace profiler::features
