#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "profiler/types.hpp"

namespace profiler::corpus {

enum class Format { kPanTruthDir, kFlatCsv };

Format parse_format(std::string_view name);
std::string_view to_string(Format f);

struct CorpusSpec {
  Format format = Format::kPanTruthDir;
  std::filesystem::path path;
  Language language = Language::kEs;
  // Group size for flat corpora; absent means one document per sample.
  std::optional<int> grouping_k;
  char delimiter = ',';
};

// PAN layout: `truth.txt` with lines
//   authorid:::gender:::ageband[:::E:::N:::A:::C:::O]
// plus `<authorid>.txt`, one document per line. Either file may carry a
// ".gz" suffix. An optional `<authorid>.pos` sidecar in the tagged-token
// format attaches tagger output to each document, in order.
std::vector<Sample> load_pan_truth_dir(const CorpusSpec& spec);

// Delimited UTF-8 with a header naming at least `id`, `gender`, `text`.
// Quoting follows RFC 4180. An optional sidecar `<path>.pos` holds one
// tagged-token group per row.
std::vector<LabeledDocument> load_flat_csv(const CorpusSpec& spec);

// Writers producing files the loaders read back identically.
void write_pan_truth_dir(const std::filesystem::path& dir,
                         const std::vector<Sample>& samples);
void write_flat_csv(const std::filesystem::path& path,
                    const std::vector<LabeledDocument>& docs,
                    char delimiter = ',');

// Chunks documents of each label class, in input order, into consecutive
// samples of `k`; the undersized residual of each class becomes its own
// sample. Classes are emitted in order of first appearance.
std::vector<Sample> group_into_samples(const std::vector<LabeledDocument>& docs,
                                       int k);

// Loads any corpus into samples (flat corpora grouped by grouping_k, or 1).
std::vector<Sample> load_samples(const CorpusSpec& spec);

// Hash over every input file of the corpus, in a fixed order.
std::uint64_t fingerprint(const CorpusSpec& spec);

enum class StratifyBy { kGender, kAgeBand, kNone };

// Class key used for stratification; throws DataError if the sample lacks
// the label.
std::string stratum_of(const Sample& s, StratifyBy by);

struct Split {
  std::vector<Sample> train;
  std::vector<Sample> test;
};

// Per class: seeded shuffle, then floor(fraction * n) samples (at least one
// when the class has two or more) go to train. Both halves keep input order.
Split stratified_split(const std::vector<Sample>& samples, double train_fraction,
                       std::uint64_t seed, StratifyBy by = StratifyBy::kGender);

}  // namespace profiler::corpus
