#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace profiler {

enum class Language { kEs, kEn, kIt, kNl };

// Throws ConfigError for anything but es/en/it/nl.
Language parse_language(std::string_view code);
std::string_view to_string(Language lang);

enum class Task { kGender, kAge, kTraits };

// Throws ConfigError for anything but gender/age/traits.
Task parse_task(std::string_view name);
std::string_view to_string(Task t);

enum class Gender { kFemale, kMale };

enum class AgeBand { k18_24, k25_34, k35_49, k50_XX };

inline constexpr std::array<AgeBand, 4> kAgeBands = {
    AgeBand::k18_24, AgeBand::k25_34, AgeBand::k35_49, AgeBand::k50_XX};

// Accepts F/FEMALE/M/MALE, case-insensitive.
std::optional<Gender> parse_gender(std::string_view token);
std::string_view to_string(Gender g);

// Accepts the canonical tokens 18-24, 25-34, 35-49, 50-XX (and >50).
std::optional<AgeBand> parse_age_band(std::string_view token);
// Canonical storage token (50-XX for the oldest band).
std::string_view to_string(AgeBand a);
// Display form (>50 for the oldest band).
std::string_view display_name(AgeBand a);

// Big-Five traits in PAN truth-file column order.
enum class Trait { kE, kN, kA, kC, kO };
inline constexpr size_t kNumTraits = 5;
inline constexpr std::array<std::string_view, kNumTraits> kTraitNames = {
    "E", "N", "A", "C", "O"};
using TraitVector = std::array<double, kNumTraits>;

inline constexpr double kTraitMin = -0.5;
inline constexpr double kTraitMax = 0.5;

struct LabelSet {
  std::optional<Gender> gender;
  std::optional<AgeBand> age_band;
  std::optional<TraitVector> traits;

  bool empty() const { return !gender && !age_band && !traits; }
  bool operator==(const LabelSet&) const = default;
};

struct TaggedToken {
  std::string surface;
  std::string fine_tag;

  bool operator==(const TaggedToken&) const = default;
};

struct Document {
  std::string id;
  std::string text;
  // Externally tagged tokens for this document; empty when untagged.
  std::vector<TaggedToken> pos_tokens;

  bool operator==(const Document&) const = default;
};

struct LabeledDocument {
  Document document;
  LabelSet labels;
};

struct Sample {
  std::string id;
  std::vector<Document> documents;
  LabelSet labels;
};

}  // namespace profiler
