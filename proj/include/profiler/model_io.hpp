#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "profiler/features.hpp"
#include "profiler/learner.hpp"

namespace profiler::model_io {

// Everything a prediction run needs besides the vocabulary itself.
struct ModelFile {
  Task task = Task::kGender;
  std::uint64_t vocab_hash = 0;
  features::ScalingPolicy scaling;
  learner::TrainConfig config;
  std::variant<learner::LinearModel, learner::OneVsRestModel, learner::TraitRegressor> model;
};

// Versioned text format; weights are stored sparsely as shortest
// round-trip decimals, so a reload predicts bit-identically. The file ends
// with an `end` line; anything short of it is rejected.
std::string serialize(const ModelFile& m);
ModelFile parse(std::string_view text);

void save_model(const std::filesystem::path& path, const ModelFile& m);
// Throws DataError on version mismatch or truncation.
ModelFile load_model(const std::filesystem::path& path);

// Throws DataError unless the model was trained against `vocab`.
void check_vocabulary(const ModelFile& m, const features::Vocabulary& vocab);

size_t dimension(const ModelFile& m);

}  // namespace profiler::model_io
