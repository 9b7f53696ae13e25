// Parallel kernels against their serial twins on a synthetic corpus.

#include <benchmark/benchmark.h>

#include "profiler/learner.hpp"
#include "profiler/pipeline.hpp"
#include "profiler/synthetic.hpp"

using namespace profiler;

namespace {

struct Fixture {
  std::vector<Sample> samples;
  pipeline::PipelineOptions opts;
  std::vector<pipeline::SampleFeatures> feats;
  features::Vocabulary vocab;
  features::ScalingPolicy policy{features::Scale::kLinear, features::Scale::kLog2};
  std::vector<features::SparseVector> x;
  std::vector<std::string> age;
  std::vector<TraitVector> traits;

  Fixture() {
    synthetic::PanOptions o;
    o.samples = 200;
    samples = synthetic::pan_samples(o);
    feats = pipeline::extract_all_serial(samples, opts);
    vocab = features::Vocabulary::build(pipeline::bags_of(feats), 2);
    x = pipeline::vectorize_all_serial(feats, vocab, policy);
    for (const auto& s : samples) {
      age.emplace_back(to_string(*s.labels.age_band));
      traits.push_back(*s.labels.traits);
    }
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_ExtractSerial(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(pipeline::extract_all_serial(f.samples, f.opts));
}
void BM_ExtractParallel(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(pipeline::extract_all(f.samples, f.opts));
}

void BM_VectorizeSerial(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(pipeline::vectorize_all_serial(f.feats, f.vocab, f.policy));
}
void BM_VectorizeParallel(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(pipeline::vectorize_all(f.feats, f.vocab, f.policy));
}

void BM_OvrSerial(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(learner::train_ovr_serial(f.x, f.age, {}));
}
void BM_OvrParallel(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(learner::train_ovr(f.x, f.age, {}));
}

void BM_TraitsSerial(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(learner::train_traits_serial(f.x, f.traits, {}));
}
void BM_TraitsParallel(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(learner::train_traits(f.x, f.traits, {}));
}

}  // namespace

BENCHMARK(BM_ExtractSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_VectorizeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VectorizeParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_OvrSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OvrParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TraitsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TraitsParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
