#include "profiler/pipeline.hpp"

#include "profiler/parallel.hpp"

namespace profiler::pipeline {

pos::PosStream document_pos(const Document& doc, const std::string& normalized_text,
                            const PipelineOptions& opts) {
  if (doc.pos_tokens.empty())
    return pos::relabel(pos::fallback_tag(pos::tokenize(normalized_text), opts.lexicon));
  std::vector<TaggedToken> tokens = doc.pos_tokens;
  for (auto& tok : tokens) tok.surface = normalizer::normalize(tok.surface, opts.rules).text;
  return pos::relabel(tokens);
}

SampleFeatures extract_sample(const Sample& sample, const PipelineOptions& opts) {
  SampleFeatures out;
  for (const auto& doc : sample.documents) {
    const auto norm = normalizer::normalize(doc.text, opts.rules);
    features::add_char_ngrams(norm.text, opts.n_min, opts.n_max, out.bags.chars);
    if (doc.pos_tokens.empty()) ++out.fallback_documents;
    features::add_pos_ngrams(document_pos(doc, norm.text, opts), opts.n_min, opts.n_max,
                             out.bags.pos);
  }
  return out;
}

std::vector<SampleFeatures> extract_all(std::span<const Sample> samples,
                                        const PipelineOptions& opts) {
  std::vector<SampleFeatures> out(samples.size());
  ParallelErrors errors;
  const auto n = static_cast<std::ptrdiff_t>(samples.size());
#pragma omp parallel for schedule(dynamic, 4) default(none) shared(samples, opts, out, errors, n)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    errors.capture(static_cast<size_t>(i), [&] { out[i] = extract_sample(samples[i], opts); });
  }
  errors.rethrow();
  return out;
}

std::vector<SampleFeatures> extract_all_serial(std::span<const Sample> samples,
                                               const PipelineOptions& opts) {
  std::vector<SampleFeatures> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(extract_sample(s, opts));
  return out;
}

std::vector<features::SparseVector> vectorize_all(std::span<const SampleFeatures> feats,
                                                  const features::Vocabulary& vocab,
                                                  const features::ScalingPolicy& policy) {
  std::vector<features::SparseVector> out(feats.size());
  ParallelErrors errors;
  const auto n = static_cast<std::ptrdiff_t>(feats.size());
#pragma omp parallel for schedule(static) default(none) shared(feats, vocab, policy, out, errors, n)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    errors.capture(static_cast<size_t>(i),
                   [&] { out[i] = features::vectorize(feats[i].bags, vocab, policy); });
  }
  errors.rethrow();
  return out;
}

std::vector<features::SparseVector> vectorize_all_serial(
    std::span<const SampleFeatures> feats, const features::Vocabulary& vocab,
    const features::ScalingPolicy& policy) {
  std::vector<features::SparseVector> out;
  out.reserve(feats.size());
  for (const auto& f : feats) out.push_back(features::vectorize(f.bags, vocab, policy));
  return out;
}

std::vector<const features::SampleBags*> bags_of(std::span<const SampleFeatures> feats) {
  std::vector<const features::SampleBags*> out;
  out.reserve(feats.size());
  for (const auto& f : feats) out.push_back(&f.bags);
  return out;
}

size_t count_fallback(std::span<const SampleFeatures> feats) {
  size_t n = 0;
  for (const auto& f : feats) n += f.fallback_documents;
  return n;
}

}  // namespace profiler::pipeline
