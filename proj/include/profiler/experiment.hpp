#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "profiler/config.hpp"
#include "profiler/corpus.hpp"
#include "profiler/features.hpp"
#include "profiler/metrics.hpp"
#include "profiler/model_io.hpp"
#include "profiler/pipeline.hpp"

namespace profiler::experiment {

// Rules from the configured file, else the language defaults; lexicon if set.
pipeline::PipelineOptions make_options(const config::ExperimentConfig& c);
pipeline::PipelineOptions make_options(Language language,
                                       const std::optional<std::filesystem::path>& rules,
                                       const std::optional<std::filesystem::path>& lexicon,
                                       int n_min = 1, int n_max = 3);

// Class id of a sample for a classification task: F/M or the age token.
std::string class_of(const Sample& s, Task task);
// Canonical class order for a task, and the row labels used in reports.
std::vector<std::string> canonical_classes(Task task);
std::string display_class(Task task, const std::string& id);

struct Trained {
  features::Vocabulary vocab;
  model_io::ModelFile model;
};

// Vocabulary over the training samples, then the task's learner. Gender is
// one binary model with F positive; age is one-vs-rest; traits are five
// regressions.
Trained train(std::span<const pipeline::SampleFeatures> feats,
              std::span<const Sample> samples, Task task,
              const features::ScalingPolicy& policy, int min_df,
              const learner::TrainConfig& cfg);

struct SamplePrediction {
  std::string id;
  std::string label;  // class id, or the five traits joined by ','
  double margin = 0.0;
  TraitVector traits{};
};

std::vector<SamplePrediction> predict(const Trained& t,
                                      std::span<const pipeline::SampleFeatures> feats,
                                      std::span<const Sample> samples);

// `sample_id<TAB>label<TAB>margin` per line (no margin for traits).
std::string format_predictions(Task task, std::span<const SamplePrediction> preds);
// Reads the same format back; truth files use it too, margin optional.
std::vector<SamplePrediction> parse_predictions(std::string_view text, Task task,
                                                std::string_view source);

struct Evaluation {
  std::optional<metrics::ClassReport> classes;
  std::optional<metrics::TraitReport> traits;
  std::vector<std::string> display;
};

// Pairs predictions with truth by sample id; every truth id must be present.
Evaluation evaluate(Task task, std::span<const SamplePrediction> preds,
                    std::span<const SamplePrediction> truth);
std::vector<SamplePrediction> truth_of(std::span<const Sample> samples, Task task);

std::string format_evaluation(const Evaluation& e);
// `name = value` lines at full precision.
std::string format_metrics(const Evaluation& e);

struct SweepRow {
  int k = 0;
  size_t samples = 0;
  size_t train = 0;
  size_t test = 0;
  Evaluation eval;
};

struct Result {
  config::ExperimentConfig config;
  features::ScalingPolicy scaling;
  std::uint64_t config_hash = 0;
  std::uint64_t train_fingerprint = 0;
  std::optional<std::uint64_t> test_fingerprint;
  std::optional<std::uint64_t> vocab_hash;
  std::string mode;  // split | external | sweep
  size_t train_samples = 0;
  size_t test_samples = 0;
  size_t documents = 0;
  size_t fallback_documents = 0;
  std::optional<Evaluation> eval;
  std::vector<SweepRow> sweep;
  std::map<std::string, double> timings;
};

Result run(const config::ExperimentConfig& c);
// run() over the sweep's k values one at a time; the reference for tests.
Result run_serial(const config::ExperimentConfig& c);

// Config echo, provenance, warnings and metrics; [timings] last, the only
// section that varies between identical runs.
std::string format_result(const Result& r);

}  // namespace profiler::experiment
