#pragma once

#include <cstdint>
#include <vector>

#include "profiler/types.hpp"

namespace profiler::synthetic {

// Neutral filler text with planted stylistic markers: female samples use the
// emoticon "^_^", male samples letter/punctuation flooding ("noooo!!!!").
// Each age band has its own interjection and each trait a cue word whose
// frequency grows with the trait value. Mentions, links and hashtags appear
// in both classes at the same rate.
struct PanOptions {
  size_t samples = 400;
  size_t documents_per_sample = 8;
  // Chance that a document carries its sample's gender marker.
  double marker_rate = 0.5;
  std::uint64_t seed = 2016;
};

// Genders alternate; age bands and traits are drawn independently.
std::vector<Sample> pan_samples(const PanOptions& opts);

struct FlatOptions {
  size_t documents_per_class = 600;
  // Chance that a single comment carries its class marker; class evidence
  // therefore accumulates as comments are grouped.
  double marker_rate = 0.3;
  std::uint64_t seed = 2017;
};

// Gender-labelled comments, classes interleaved.
std::vector<LabeledDocument> flat_documents(const FlatOptions& opts);

}  // namespace profiler::synthetic
