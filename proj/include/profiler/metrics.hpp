#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "profiler/types.hpp"

namespace profiler::metrics {

// Rows are truth, columns prediction.
struct ConfusionMatrix {
  std::vector<std::string> classes;
  std::vector<std::vector<long>> counts;

  long total() const;
  long trace() const;
};

ConfusionMatrix confusion(std::span<const std::string> y_true,
                          std::span<const std::string> y_pred,
                          std::span<const std::string> classes);

struct ClassScores {
  std::string label;
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long support = 0;  // tp + fn
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  // Set when a zero denominator forced a score to 0.
  bool undefined = false;
};

struct ClassReport {
  std::vector<ClassScores> classes;
  long correct = 0;
  long total = 0;
  double accuracy = 0.0;
  bool warning = false;
};

// One-vs-rest P/R/F per class (0 on a zero denominator) and overall
// accuracy. Throws DataError on an empty matrix.
ClassReport report(const ConfusionMatrix& cm);

double rmse(std::span<const double> pred, std::span<const double> truth);

struct TraitReport {
  std::array<double, kNumTraits> rmse{};
  double mean = 0.0;
};

TraitReport trait_rmse(std::span<const TraitVector> pred,
                       std::span<const TraitVector> truth);

// Arithmetic mean of per-trait RMSEs.
double mean_rmse(std::span<const double> per_trait);

// Tab-delimited `class  P  R  F  A` table with 3-decimal scores (A on the
// first row only), followed by the exact counts tp/fp/fn/support.
// `display` maps class ids to row labels; identity when empty.
std::string format_report(const ClassReport& r,
                          const std::vector<std::string>& display = {});
std::string format_traits(const TraitReport& r);

}  // namespace profiler::metrics
