#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "profiler/features.hpp"
#include "profiler/types.hpp"

namespace profiler::learner {

using features::SparseVector;

struct TrainConfig {
  double c_param = 1.0;
  int epochs = 50;
  double tolerance = 1e-4;
  std::uint64_t seed = 1;
  // Tube half-width, regression only.
  double epsilon = 0.1;
};

// Throws ConfigError on out-of-range fields.
void validate(const TrainConfig& cfg);

// Per-epoch record of a coordinate-descent run.
struct TrainTrace {
  // Objective of the returned model (the best epoch-end iterate so far)
  // after each epoch; non-increasing.
  std::vector<double> primal;
  // Objective of the raw coordinate-descent iterate after each epoch.
  std::vector<double> iterate;
  int epochs_run = 0;
  double final_violation = 0.0;
  bool converged = false;
};

// w.x + b in the original space; internally b is the weight of a constant-1
// feature, so it is regularized together with w.
struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  double c_param = 1.0;
  std::string label_positive = "+1";
  std::string label_negative = "-1";

  size_t dimension() const { return weights.size(); }
  // Throws DataError on a dimension mismatch.
  double margin(const SparseVector& x) const;
};

struct Prediction {
  std::string label;
  double margin = 0.0;
};

// L1-loss (hinge) SVM via dual coordinate descent:
//   min 1/2 (|w|^2 + b^2) + C sum_i max(0, 1 - y_i (w.x_i + b)).
// Coordinates are swept in a seeded random order each epoch; stops after
// cfg.epochs or once the largest projected-gradient violation of a sweep
// falls below cfg.tolerance. The epoch-end iterate with the lowest primal
// objective is returned. Labels must be +1/-1 with both present.
LinearModel train_binary(std::span<const SparseVector> x, std::span<const int> y,
                         const TrainConfig& cfg, TrainTrace* trace = nullptr);

LinearModel train_binary(std::span<const SparseVector> x,
                         std::span<const std::string> labels,
                         const std::string& positive, const std::string& negative,
                         const TrainConfig& cfg, TrainTrace* trace = nullptr);

// Positive label when w.x + b >= 0.
Prediction predict_binary(const LinearModel& model, const SparseVector& x);

double hinge_objective(std::span<const double> weights, double bias,
                       std::span<const SparseVector> x, std::span<const int> y,
                       double c_param);

struct OneVsRestModel {
  std::vector<std::string> classes;
  std::vector<LinearModel> models;

  size_t dimension() const { return models.empty() ? 0 : models.front().dimension(); }
};

// One class-vs-rest model per class, classes in order of first appearance.
// Sub-problems train in parallel; train_ovr_serial is the reference.
OneVsRestModel train_ovr(std::span<const SparseVector> x, std::span<const std::string> y,
                         const TrainConfig& cfg);
OneVsRestModel train_ovr_serial(std::span<const SparseVector> x,
                                std::span<const std::string> y, const TrainConfig& cfg);

// Argmax of the per-class margins; ties go to the earliest class.
Prediction predict_ovr(const OneVsRestModel& model, const SparseVector& x);
size_t argmax_first(std::span<const double> margins);

struct TraitRegressor {
  std::array<std::vector<double>, kNumTraits> weights;
  std::array<double, kNumTraits> bias{};
  double c_param = 1.0;
  double epsilon = 0.1;

  size_t dimension() const { return weights[0].size(); }
};

// L1-loss epsilon-SVR via dual coordinate descent:
//   min 1/2 (|w|^2 + b^2) + C sum_i max(0, |w.x_i + b - t_i| - eps).
LinearModel train_svr(std::span<const SparseVector> x, std::span<const double> targets,
                      const TrainConfig& cfg, TrainTrace* trace = nullptr);

double epsilon_objective(std::span<const double> weights, double bias,
                         std::span<const SparseVector> x, std::span<const double> t,
                         double c_param, double epsilon);

// Five independent regressions (parallel); targets must lie in [-0.5, 0.5].
TraitRegressor train_traits(std::span<const SparseVector> x,
                            std::span<const TraitVector> targets, const TrainConfig& cfg);
TraitRegressor train_traits_serial(std::span<const SparseVector> x,
                                   std::span<const TraitVector> targets,
                                   const TrainConfig& cfg);

// Per-trait w.x + b clamped to [-0.5, 0.5].
TraitVector predict_traits(const TraitRegressor& model, const SparseVector& x);

}  // namespace profiler::learner
