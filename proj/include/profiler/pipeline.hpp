#pragma once

#include <span>
#include <vector>

#include "profiler/features.hpp"
#include "profiler/normalizer.hpp"
#include "profiler/pos.hpp"
#include "profiler/types.hpp"

namespace profiler::pipeline {

struct PipelineOptions {
  normalizer::RuleSet rules = normalizer::default_rules(Language::kEs);
  pos::Lexicon lexicon;
  int n_min = 1;
  int n_max = 3;
};

struct SampleFeatures {
  features::SampleBags bags;
  // Documents that had no tagger output and went through fallback_tag.
  size_t fallback_documents = 0;
};

// POS stream of one document: its tagger tokens (surfaces normalized so raw
// mentions and links still map to REF tags), or the fallback tagger over the
// normalized text when untagged.
pos::PosStream document_pos(const Document& doc, const std::string& normalized_text,
                            const PipelineOptions& opts);

// Normalize, tag, and count grams over every document of the sample.
SampleFeatures extract_sample(const Sample& sample, const PipelineOptions& opts);

// OpenMP kernels over samples. Each has a serial twin used as the reference
// in tests and benchmarks; outputs are identical.
std::vector<SampleFeatures> extract_all(std::span<const Sample> samples,
                                        const PipelineOptions& opts);
std::vector<SampleFeatures> extract_all_serial(std::span<const Sample> samples,
                                               const PipelineOptions& opts);

std::vector<features::SparseVector> vectorize_all(std::span<const SampleFeatures> feats,
                                                  const features::Vocabulary& vocab,
                                                  const features::ScalingPolicy& policy);
std::vector<features::SparseVector> vectorize_all_serial(
    std::span<const SampleFeatures> feats, const features::Vocabulary& vocab,
    const features::ScalingPolicy& policy);

std::vector<const features::SampleBags*> bags_of(std::span<const SampleFeatures> feats);

size_t count_fallback(std::span<const SampleFeatures> feats);

}  // namespace profiler::pipeline
