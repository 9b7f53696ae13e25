#include "profiler/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "profiler/error.hpp"

namespace profiler::metrics {

long ConfusionMatrix::total() const {
  long t = 0;
  for (const auto& row : counts)
    for (long c : row) t += c;
  return t;
}

long ConfusionMatrix::trace() const {
  long t = 0;
  for (size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
  return t;
}

ConfusionMatrix confusion(std::span<const std::string> y_true,
                          std::span<const std::string> y_pred,
                          std::span<const std::string> classes) {
  if (y_true.size() != y_pred.size())
    throw DataError("truth/prediction length mismatch: " + std::to_string(y_true.size()) +
                    " vs " + std::to_string(y_pred.size()));
  if (y_true.empty()) throw DataError("no predictions to evaluate");
  ConfusionMatrix cm;
  cm.classes.assign(classes.begin(), classes.end());
  cm.counts.assign(classes.size(), std::vector<long>(classes.size(), 0));
  auto index = [&](const std::string& label) {
    auto it = std::find(classes.begin(), classes.end(), label);
    if (it == classes.end()) throw DataError("label '" + label + "' is not a known class");
    return static_cast<size_t>(it - classes.begin());
  };
  for (size_t k = 0; k < y_true.size(); ++k) ++cm.counts[index(y_true[k])][index(y_pred[k])];
  return cm;
}

ClassReport report(const ConfusionMatrix& cm) {
  ClassReport r;
  r.total = cm.total();
  if (r.total <= 0) throw DataError("empty confusion matrix");
  r.correct = cm.trace();
  r.accuracy = static_cast<double>(r.correct) / static_cast<double>(r.total);
  const size_t k = cm.classes.size();
  for (size_t i = 0; i < k; ++i) {
    ClassScores s;
    s.label = cm.classes[i];
    s.tp = cm.counts[i][i];
    for (size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      s.fn += cm.counts[i][j];
      s.fp += cm.counts[j][i];
    }
    s.support = s.tp + s.fn;
    if (s.tp + s.fp > 0) s.precision = double(s.tp) / double(s.tp + s.fp);
    else s.undefined = true;
    if (s.support > 0) s.recall = double(s.tp) / double(s.support);
    else s.undefined = true;
    if (s.precision + s.recall > 0.0)
      s.f_score = 2.0 * s.precision * s.recall / (s.precision + s.recall);
    r.warning = r.warning || s.undefined;
    r.classes.push_back(std::move(s));
  }
  return r;
}

double rmse(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size())
    throw DataError("rmse: length mismatch " + std::to_string(pred.size()) + " vs " +
                    std::to_string(truth.size()));
  if (pred.empty()) throw DataError("rmse of empty vectors");
  double s = 0.0;
  for (size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - truth[i];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(pred.size()));
}

double mean_rmse(std::span<const double> per_trait) {
  if (per_trait.empty()) throw DataError("mean of no RMSE values");
  double s = 0.0;
  for (double v : per_trait) s += v;
  return s / static_cast<double>(per_trait.size());
}

TraitReport trait_rmse(std::span<const TraitVector> pred,
                       std::span<const TraitVector> truth) {
  if (pred.size() != truth.size()) throw DataError("trait prediction count mismatch");
  if (pred.empty()) throw DataError("no trait predictions to evaluate");
  TraitReport r;
  std::vector<double> p(pred.size()), t(pred.size());
  for (size_t k = 0; k < kNumTraits; ++k) {
    for (size_t i = 0; i < pred.size(); ++i) {
      p[i] = pred[i][k];
      t[i] = truth[i][k];
    }
    r.rmse[k] = rmse(p, t);
  }
  r.mean = mean_rmse(r.rmse);
  return r;
}

namespace {

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::string format_report(const ClassReport& r, const std::vector<std::string>& display) {
  std::string out = "class\tP\tR\tF\tA\ttp\tfp\tfn\tsupport\n";
  for (size_t i = 0; i < r.classes.size(); ++i) {
    const auto& s = r.classes[i];
    out += (i < display.size() ? display[i] : s.label) + '\t' + fmt3(s.precision) + '\t' +
           fmt3(s.recall) + '\t' + fmt3(s.f_score) + '\t' +
           (i == 0 ? fmt3(r.accuracy) : std::string()) + '\t' + std::to_string(s.tp) +
           '\t' + std::to_string(s.fp) + '\t' + std::to_string(s.fn) + '\t' +
           std::to_string(s.support) + '\n';
  }
  out += "accuracy\t" + std::to_string(r.correct) + "/" + std::to_string(r.total) + '\n';
  if (r.warning) out += "warning\tzero denominator; affected scores set to 0\n";
  return out;
}

std::string format_traits(const TraitReport& r) {
  std::string out = "trait\tRMSE\n";
  for (size_t k = 0; k < kNumTraits; ++k)
    out += std::string(kTraitNames[k]) + '\t' + fmt3(r.rmse[k]) + '\n';
  out += "Mean\t" + fmt3(r.mean) + '\n';
  return out;
}

}  // namespace profiler::metrics
