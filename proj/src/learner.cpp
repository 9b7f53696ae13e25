#include "profiler/learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "profiler/error.hpp"
#include "profiler/random.hpp"
#include "profiler/parallel.hpp"

namespace profiler::learner {

namespace {

// Checks shapes and values; returns the shared dimension.
size_t check_inputs(std::span<const SparseVector> x, size_t n_targets) {
  if (x.size() != n_targets)
    throw DataError("feature/target count mismatch: " + std::to_string(x.size()) +
                    " vs " + std::to_string(n_targets));
  if (x.empty()) throw DataError("no training examples");
  const size_t dim = x.front().dimension;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i].dimension != dim)
      throw DataError("example " + std::to_string(i) + " has dimension " +
                      std::to_string(x[i].dimension) + ", expected " + std::to_string(dim));
    for (const auto& [col, v] : x[i].entries) {
      if (col >= dim) throw DataError("example " + std::to_string(i) + ": column out of range");
      if (!std::isfinite(v))
        throw DataError("example " + std::to_string(i) + ": non-finite feature value");
    }
  }
  return dim;
}

void add_scaled(std::vector<double>& w, double& b, const SparseVector& x, double d) {
  for (const auto& [col, v] : x.entries) w[col] += d * v;
  b += d;
}

void shuffle(std::vector<size_t>& idx, std::mt19937_64& rng) { seeded_shuffle(idx, rng); }

// Epoch-end iterate with the lowest primal objective.
struct Incumbent {
  double objective = std::numeric_limits<double>::infinity();
  std::vector<double> w;
  double b = 0.0;

  void offer(double obj, const std::vector<double>& cand_w, double cand_b) {
    if (obj >= objective) return;
    objective = obj;
    w = cand_w;
    b = cand_b;
  }
};

std::vector<double> diagonal(std::span<const SparseVector> x) {
  std::vector<double> q(x.size());
  for (size_t i = 0; i < x.size(); ++i) q[i] = x[i].squared_norm() + 1.0;
  return q;
}

}  // namespace

void validate(const TrainConfig& cfg) {
  if (!(cfg.c_param > 0.0) || !std::isfinite(cfg.c_param))
    throw ConfigError("C must be a positive finite number");
  if (cfg.epochs < 1) throw ConfigError("epochs must be >= 1");
  if (!(cfg.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  if (!(cfg.epsilon >= 0.0) || !std::isfinite(cfg.epsilon))
    throw ConfigError("epsilon must be non-negative");
}

double LinearModel::margin(const SparseVector& x) const {
  if (x.dimension != weights.size())
    throw DataError("dimension mismatch: model has " + std::to_string(weights.size()) +
                    " features, input has " + std::to_string(x.dimension));
  return x.dot(weights) + bias;
}

double hinge_objective(std::span<const double> weights, double bias,
                       std::span<const SparseVector> x, std::span<const int> y,
                       double c_param) {
  double reg = bias * bias;
  for (double w : weights) reg += w * w;
  double loss = 0.0;
  for (size_t i = 0; i < x.size(); ++i)
    loss += std::max(0.0, 1.0 - y[i] * (x[i].dot(weights) + bias));
  return 0.5 * reg + c_param * loss;
}

double epsilon_objective(std::span<const double> weights, double bias,
                         std::span<const SparseVector> x, std::span<const double> t,
                         double c_param, double epsilon) {
  double reg = bias * bias;
  for (double w : weights) reg += w * w;
  double loss = 0.0;
  for (size_t i = 0; i < x.size(); ++i)
    loss += std::max(0.0, std::abs(x[i].dot(weights) + bias - t[i]) - epsilon);
  return 0.5 * reg + c_param * loss;
}

LinearModel train_binary(std::span<const SparseVector> x, std::span<const int> y,
                         const TrainConfig& cfg, TrainTrace* trace) {
  validate(cfg);
  const size_t dim = check_inputs(x, y.size());
  if (x.size() < 2) throw DataError("binary training needs at least two examples");
  bool has_pos = false;
  bool has_neg = false;
  for (int label : y) {
    if (label == 1) has_pos = true;
    else if (label == -1) has_neg = true;
    else throw DataError("binary labels must be +1 or -1");
  }
  if (!has_pos || !has_neg) throw DataError("binary training needs both classes present");

  const size_t n = x.size();
  const double c = cfg.c_param;
  const std::vector<double> q = diagonal(x);
  std::vector<double> alpha(n, 0.0);
  std::vector<double> w(dim, 0.0);
  double b = 0.0;
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(cfg.seed);

  TrainTrace local;
  Incumbent best;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(order, rng);
    double max_violation = 0.0;
    for (size_t i : order) {
      const double yi = y[i];
      const double g = yi * (x[i].dot(w) + b) - 1.0;
      double pg = g;
      if (alpha[i] == 0.0) pg = std::min(g, 0.0);
      else if (alpha[i] == c) pg = std::max(g, 0.0);
      max_violation = std::max(max_violation, std::abs(pg));
      if (std::abs(pg) > 1e-12) {
        const double old = alpha[i];
        alpha[i] = std::clamp(old - g / q[i], 0.0, c);
        const double d = (alpha[i] - old) * yi;
        if (d != 0.0) add_scaled(w, b, x[i], d);
      }
    }
    const double objective = hinge_objective(w, b, x, y, c);
    local.iterate.push_back(objective);
    best.offer(objective, w, b);
    local.primal.push_back(best.objective);
    local.epochs_run = epoch + 1;
    local.final_violation = max_violation;
    if (max_violation < cfg.tolerance) {
      local.converged = true;
      break;
    }
  }
  if (trace) *trace = std::move(local);

  LinearModel model;
  model.weights = std::move(best.w);
  model.bias = best.b;
  model.c_param = c;
  return model;
}

LinearModel train_binary(std::span<const SparseVector> x,
                         std::span<const std::string> labels,
                         const std::string& positive, const std::string& negative,
                         const TrainConfig& cfg, TrainTrace* trace) {
  std::vector<int> y(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == positive) y[i] = 1;
    else if (labels[i] == negative) y[i] = -1;
    else throw DataError("label '" + labels[i] + "' is neither '" + positive + "' nor '" +
                         negative + "'");
  }
  LinearModel m = train_binary(x, y, cfg, trace);
  m.label_positive = positive;
  m.label_negative = negative;
  return m;
}

Prediction predict_binary(const LinearModel& model, const SparseVector& x) {
  const double m = model.margin(x);
  return {m >= 0.0 ? model.label_positive : model.label_negative, m};
}

namespace {

std::vector<std::string> classes_in_order(std::span<const std::string> y) {
  std::vector<std::string> classes;
  for (const auto& label : y)
    if (std::find(classes.begin(), classes.end(), label) == classes.end())
      classes.push_back(label);
  return classes;
}

LinearModel train_one_vs_rest(std::span<const SparseVector> x,
                              std::span<const std::string> y, const std::string& cls,
                              const TrainConfig& cfg) {
  std::vector<int> yy(y.size());
  for (size_t i = 0; i < y.size(); ++i) yy[i] = y[i] == cls ? 1 : -1;
  LinearModel m = train_binary(x, yy, cfg);
  m.label_positive = cls;
  m.label_negative = "rest";
  return m;
}

void check_ovr_inputs(std::span<const SparseVector> x, std::span<const std::string> y,
                      const std::vector<std::string>& classes) {
  check_inputs(x, y.size());
  if (classes.size() < 2)
    throw DataError("one-vs-rest training needs at least two distinct classes");
}

}  // namespace

OneVsRestModel train_ovr(std::span<const SparseVector> x, std::span<const std::string> y,
                         const TrainConfig& cfg) {
  validate(cfg);
  OneVsRestModel out;
  out.classes = classes_in_order(y);
  check_ovr_inputs(x, y, out.classes);
  out.models.resize(out.classes.size());
  ParallelErrors errors;
  const auto k = static_cast<std::ptrdiff_t>(out.classes.size());
#pragma omp parallel for schedule(dynamic, 1) default(none) shared(x, y, cfg, out, errors, k)
  for (std::ptrdiff_t c = 0; c < k; ++c) {
    errors.capture(static_cast<size_t>(c), [&] {
      out.models[c] = train_one_vs_rest(x, y, out.classes[c], cfg);
    });
  }
  errors.rethrow();
  return out;
}

OneVsRestModel train_ovr_serial(std::span<const SparseVector> x,
                                std::span<const std::string> y, const TrainConfig& cfg) {
  validate(cfg);
  OneVsRestModel out;
  out.classes = classes_in_order(y);
  check_ovr_inputs(x, y, out.classes);
  for (const auto& cls : out.classes) out.models.push_back(train_one_vs_rest(x, y, cls, cfg));
  return out;
}

size_t argmax_first(std::span<const double> margins) {
  size_t best = 0;
  for (size_t i = 1; i < margins.size(); ++i)
    if (margins[i] > margins[best]) best = i;
  return best;
}

Prediction predict_ovr(const OneVsRestModel& model, const SparseVector& x) {
  if (model.models.empty()) throw DataError("empty one-vs-rest model");
  std::vector<double> margins;
  margins.reserve(model.models.size());
  for (const auto& m : model.models) margins.push_back(m.margin(x));
  const size_t best = argmax_first(margins);
  return {model.classes[best], margins[best]};
}

LinearModel train_svr(std::span<const SparseVector> x, std::span<const double> targets,
                      const TrainConfig& cfg, TrainTrace* trace) {
  validate(cfg);
  const size_t dim = check_inputs(x, targets.size());
  for (double t : targets)
    if (!std::isfinite(t)) throw DataError("non-finite regression target");

  const size_t n = x.size();
  const double c = cfg.c_param;
  const double eps = cfg.epsilon;
  const std::vector<double> q = diagonal(x);
  std::vector<double> beta(n, 0.0);
  std::vector<double> w(dim, 0.0);
  double b = 0.0;
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(cfg.seed);

  TrainTrace local;
  Incumbent best;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(order, rng);
    double max_violation = 0.0;
    for (size_t i : order) {
      const double g = x[i].dot(w) + b - targets[i];
      const double gp = g + eps;
      const double gn = g - eps;
      const double bi = beta[i];
      double violation = 0.0;
      if (bi == 0.0) {
        if (gp < 0.0) violation = -gp;
        else if (gn > 0.0) violation = gn;
      } else if (bi >= c) {
        if (gp > 0.0) violation = gp;
      } else if (bi <= -c) {
        if (gn < 0.0) violation = -gn;
      } else if (bi > 0.0) {
        violation = std::abs(gp);
      } else {
        violation = std::abs(gn);
      }
      max_violation = std::max(max_violation, violation);

      // Newton step on the piecewise-quadratic one-variable dual.
      const double h = q[i];
      double d = 0.0;
      if (gp < h * bi) d = -gp / h;
      else if (gn > h * bi) d = -gn / h;
      else d = -bi;
      if (std::abs(d) < 1e-12) continue;
      beta[i] = std::clamp(bi + d, -c, c);
      const double step = beta[i] - bi;
      if (step != 0.0) add_scaled(w, b, x[i], step);
    }
    const double objective = epsilon_objective(w, b, x, targets, c, eps);
    local.iterate.push_back(objective);
    best.offer(objective, w, b);
    local.primal.push_back(best.objective);
    local.epochs_run = epoch + 1;
    local.final_violation = max_violation;
    if (max_violation < cfg.tolerance) {
      local.converged = true;
      break;
    }
  }
  if (trace) *trace = std::move(local);

  LinearModel model;
  model.weights = std::move(best.w);
  model.bias = best.b;
  model.c_param = c;
  model.label_positive = "value";
  model.label_negative = "-";
  return model;
}

namespace {

void check_trait_targets(std::span<const TraitVector> targets) {
  for (size_t i = 0; i < targets.size(); ++i)
    for (double t : targets[i])
      if (!(t >= kTraitMin && t <= kTraitMax))
        throw DataError("trait target of example " + std::to_string(i) +
                        " outside [-0.5, 0.5]");
}

LinearModel train_trait(std::span<const SparseVector> x,
                        std::span<const TraitVector> targets, size_t trait,
                        const TrainConfig& cfg) {
  std::vector<double> t(targets.size());
  for (size_t i = 0; i < targets.size(); ++i) t[i] = targets[i][trait];
  return train_svr(x, t, cfg);
}

void store(TraitRegressor& out, size_t trait, LinearModel&& m) {
  out.weights[trait] = std::move(m.weights);
  out.bias[trait] = m.bias;
}

}  // namespace

TraitRegressor train_traits(std::span<const SparseVector> x,
                            std::span<const TraitVector> targets, const TrainConfig& cfg) {
  validate(cfg);
  check_inputs(x, targets.size());
  check_trait_targets(targets);
  TraitRegressor out;
  out.c_param = cfg.c_param;
  out.epsilon = cfg.epsilon;
  ParallelErrors errors;
  const auto k = static_cast<std::ptrdiff_t>(kNumTraits);
#pragma omp parallel for schedule(dynamic, 1) default(none) shared(x, targets, cfg, out, errors, k)
  for (std::ptrdiff_t t = 0; t < k; ++t) {
    errors.capture(static_cast<size_t>(t), [&] {
      store(out, static_cast<size_t>(t), train_trait(x, targets, static_cast<size_t>(t), cfg));
    });
  }
  errors.rethrow();
  return out;
}

TraitRegressor train_traits_serial(std::span<const SparseVector> x,
                                   std::span<const TraitVector> targets,
                                   const TrainConfig& cfg) {
  validate(cfg);
  check_inputs(x, targets.size());
  check_trait_targets(targets);
  TraitRegressor out;
  out.c_param = cfg.c_param;
  out.epsilon = cfg.epsilon;
  for (size_t t = 0; t < kNumTraits; ++t) store(out, t, train_trait(x, targets, t, cfg));
  return out;
}

TraitVector predict_traits(const TraitRegressor& model, const SparseVector& x) {
  if (x.dimension != model.dimension())
    throw DataError("dimension mismatch: model has " + std::to_string(model.dimension()) +
                    " features, input has " + std::to_string(x.dimension));
  TraitVector out{};
  for (size_t t = 0; t < kNumTraits; ++t)
    out[t] = std::clamp(x.dot(model.weights[t]) + model.bias[t], kTraitMin, kTraitMax);
  return out;
}

}  // namespace profiler::learner
