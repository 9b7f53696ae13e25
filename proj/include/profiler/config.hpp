#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "profiler/corpus.hpp"
#include "profiler/features.hpp"
#include "profiler/learner.hpp"

namespace profiler::config {

struct IniEntry {
  std::string key;
  std::string value;
  size_t line = 0;
};

struct IniSection {
  std::string name;
  size_t line = 0;
  std::vector<IniEntry> entries;
};

// `[section]` headers and `key = value` lines; `#`/`;` comments. Sections
// outside `known` are skipped wholesale, so result files (which append data
// tables in their own sections) parse as configs.
std::vector<IniSection> parse_ini(std::string_view text, std::string_view source,
                                  const std::set<std::string, std::less<>>& known);

struct ExperimentConfig {
  corpus::CorpusSpec train;
  std::optional<corpus::CorpusSpec> test;
  Task task = Task::kGender;
  int n_min = 1;
  int n_max = 3;
  // Absent means resolve from the training language.
  std::optional<features::ScalingPolicy> scaling;
  double split_fraction = 0.7;
  std::uint64_t split_seed = 42;
  std::vector<int> grouping_sweep;
  int min_df = 2;
  learner::TrainConfig learner;
  std::optional<std::filesystem::path> rules;
  std::optional<std::filesystem::path> lexicon;
  std::optional<std::filesystem::path> result;
};

// Validates everything up front and throws one ConfigError listing every
// problem found. Relative paths resolve against `base_dir`.
ExperimentConfig parse_experiment(std::string_view text, std::string_view source,
                                  const std::filesystem::path& base_dir);
ExperimentConfig load_experiment(const std::filesystem::path& path);

// Canonical INI form; parse_experiment(canonical(c)) == c.
std::string canonical(const ExperimentConfig& c);

features::ScalingPolicy resolve_scaling(const ExperimentConfig& c);

}  // namespace profiler::config
