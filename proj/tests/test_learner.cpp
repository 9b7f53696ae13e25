#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "profiler/error.hpp"
#include "profiler/learner.hpp"

using namespace profiler;
using namespace profiler::learner;

namespace {

using oracle::dense;

double accuracy(const LinearModel& m, const std::vector<SparseVector>& x, const std::vector<int>& y) {
  size_t ok = 0;
  for (size_t i = 0; i < x.size(); ++i) ok += (m.margin(x[i]) >= 0.0 ? 1 : -1) == y[i];
  return double(ok) / double(x.size());
}

TrainConfig tight(double c = 1.0) {
  TrainConfig cfg;
  cfg.c_param = c;
  cfg.epochs = 100000;
  cfg.tolerance = 1e-10;
  return cfg;
}

}  // namespace

TEST(TrainBinary, SeparablePoints) {
  const std::vector<SparseVector> x = {dense({0, 1}), dense({0, 2}), dense({3, 0}), dense({4, 0})};
  const std::vector<int> y = {1, 1, -1, -1};
  const auto m = train_binary(x, y, TrainConfig{});
  EXPECT_EQ(accuracy(m, x, y), 1.0);
}

TEST(TrainBinary, Errors) {
  const std::vector<SparseVector> x = {dense({0, 1}), dense({1, 0})};
  EXPECT_THROW(train_binary(x, std::vector<int>{1, 1}, TrainConfig{}), DataError);
  EXPECT_THROW(train_binary(x, std::vector<int>{1, 0}, TrainConfig{}), DataError);
  EXPECT_THROW(train_binary(x, std::vector<int>{1}, TrainConfig{}), DataError);
  std::vector<SparseVector> bad = {dense({0, 1}), dense({1, 0, 1})};
  EXPECT_THROW(train_binary(bad, std::vector<int>{1, -1}, TrainConfig{}), DataError);
  std::vector<SparseVector> nan = {dense({0, 1}), dense({std::nan(""), 1})};
  EXPECT_THROW(train_binary(nan, std::vector<int>{1, -1}, TrainConfig{}), DataError);
  TrainConfig c;
  c.c_param = 0.0;
  EXPECT_THROW(train_binary(x, std::vector<int>{1, -1}, c), ConfigError);
}

TEST(TrainBinary, XorMatchesSubgradientOracle) {
  oracle::Instance xr;
  xr.dim = 2;
  xr.x = {dense({0, 0}), dense({1, 1}), dense({0, 1}), dense({1, 0})};
  xr.y = {1, 1, -1, -1};
  for (auto& v : xr.x) v.dimension = 2;
  const auto m = train_binary(xr.x, xr.y, tight());
  const double got = hinge_objective(m.weights, m.bias, xr.x, xr.y, 1.0);
  const double ref = oracle::subgradient_minimum(xr, 1.0, 1000000);
  EXPECT_LE(std::abs(got - ref), 1e-3);
  EXPECT_LE(got, ref + 1e-9);
}

TEST(TrainBinary, RandomInstancesMatchOracle) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = oracle::random_instance(rng, 5 + rng() % 16, 2 + rng() % 2);
    const auto m = train_binary(inst.x, inst.y, tight());
    const double got = hinge_objective(m.weights, m.bias, inst.x, inst.y, 1.0);
    const double ref = oracle::subgradient_minimum(inst, 1.0, 200000);
    EXPECT_LE(std::abs(got - ref) / ref, 1e-3) << trial;
  }
}

TEST(TrainBinary, SeparableWithLargeC) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = oracle::separable_instance(rng, 10 + rng() % 40, 2 + rng() % 4);
    TrainConfig cfg;
    cfg.c_param = 1e3;
    cfg.epochs = 5000;
    cfg.tolerance = 1e-6;
    const auto m = train_binary(inst.x, inst.y, cfg);
    EXPECT_EQ(accuracy(m, inst.x, inst.y), 1.0) << trial;
  }
}

TEST(TrainBinary, Deterministic) {
  std::mt19937_64 rng(9);
  const auto inst = oracle::random_instance(rng, 20, 3);
  TrainConfig cfg;
  cfg.seed = 77;
  const auto a = train_binary(inst.x, inst.y, cfg);
  const auto b = train_binary(inst.x, inst.y, cfg);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.bias, b.bias);
}

TEST(TrainBinary, TraceRecordsConvergence) {
  std::mt19937_64 rng(13);
  const auto inst = oracle::separable_instance(rng, 30, 3);
  TrainTrace trace;
  const auto m = train_binary(inst.x, inst.y, tight(), &trace);
  EXPECT_TRUE(trace.converged);
  EXPECT_EQ(trace.primal.size(), static_cast<size_t>(trace.epochs_run));
  EXPECT_LT(trace.final_violation, 1e-10);
  EXPECT_DOUBLE_EQ(trace.primal.back(), hinge_objective(m.weights, m.bias, inst.x, inst.y, 1.0));
  EXPECT_EQ(trace.primal.back(), *std::min_element(trace.iterate.begin(), trace.iterate.end()));
}

TEST(TrainBinary, PrimalNonIncreasingPerEpoch) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = trial % 2 ? oracle::random_instance(rng, 20, 3) : oracle::separable_instance(rng, 20, 3);
    TrainTrace trace;
    TrainConfig cfg;
    cfg.c_param = trial % 3 == 0 ? 10.0 : 1.0;
    cfg.epochs = 200;
    train_binary(inst.x, inst.y, cfg, &trace);
    for (size_t e = 1; e < trace.primal.size(); ++e)
      EXPECT_LE(trace.primal[e], trace.primal[e - 1] + 1e-9) << "trial " << trial << " epoch " << e;
  }
}

TEST(TrainBinary, ScaleCovariance) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = oracle::separable_instance(rng, 20, 2);
    TrainConfig cfg = tight(1e3);
    const auto base = train_binary(inst.x, inst.y, cfg);
    auto scaled = inst.x;
    for (auto& v : scaled)
      for (auto& [col, val] : v.entries) val *= 4.0;
    const auto m = train_binary(scaled, inst.y, cfg);
    for (size_t i = 0; i < inst.x.size(); ++i)
      EXPECT_EQ(base.margin(inst.x[i]) >= 0.0, m.margin(scaled[i]) >= 0.0);
  }
}

TEST(PredictBinary, MarginsAndTies) {
  LinearModel m;
  m.weights = {1.0, 0.0};
  m.label_positive = "F";
  m.label_negative = "M";
  auto p = predict_binary(m, dense({2, 5}));
  EXPECT_EQ(p.label, "F");
  EXPECT_EQ(p.margin, 2.0);
  m.bias = -1.0;
  p = predict_binary(m, dense({0, 0}));
  EXPECT_EQ(p.label, "M");
  EXPECT_EQ(p.margin, -1.0);
  p = predict_binary(m, dense({1, 0}));
  EXPECT_EQ(p.margin, 0.0);
  EXPECT_EQ(p.label, "F");
  EXPECT_THROW(predict_binary(m, dense({1, 0, 0})), DataError);
}

TEST(Ovr, DecompositionAndOrder) {
  std::vector<SparseVector> x = {dense({1, 0, 0}), dense({0, 1, 0}), dense({0, 0, 1}),
                                 dense({2, 0, 0}), dense({0, 2, 0}), dense({0, 0, 2})};
  std::vector<std::string> y = {"b", "a", "c", "b", "a", "c"};
  const auto m = train_ovr(x, y, TrainConfig{});
  EXPECT_EQ(m.classes, (std::vector<std::string>{"b", "a", "c"}));
  EXPECT_EQ(m.models.size(), 3u);
  for (size_t i = 0; i < x.size(); ++i) EXPECT_EQ(predict_ovr(m, x[i]).label, y[i]);
  EXPECT_THROW(train_ovr(x, std::vector<std::string>(6, "a"), TrainConfig{}), DataError);
}

TEST(Ovr, TwoClassesAgreeWithBinary) {
  std::mt19937_64 rng(5);
  const auto inst = oracle::random_instance(rng, 20, 3);
  std::vector<std::string> y;
  for (int v : inst.y) y.push_back(v > 0 ? "pos" : "neg");
  const auto ovr = train_ovr(inst.x, y, tight());
  const auto bin = train_binary(inst.x, y, "pos", "neg", tight());
  const auto held = oracle::random_instance(rng, 200, 3);
  for (const auto& x : held.x) EXPECT_EQ(predict_ovr(ovr, x).label, predict_binary(bin, x).label);
}

TEST(Ovr, ArgmaxTieRule) {
  EXPECT_EQ(argmax_first(std::vector<double>{0.5, -0.1, 0.2}), 0u);
  EXPECT_EQ(argmax_first(std::vector<double>{0.3, 0.3}), 0u);
  EXPECT_EQ(argmax_first(std::vector<double>{-3.0, -0.5, -1.0}), 1u);
  OneVsRestModel m;
  m.classes = {"x", "y"};
  for (int i = 0; i < 2; ++i) {
    LinearModel lm;
    lm.weights = {0.0};
    lm.bias = 0.3;
    m.models.push_back(lm);
  }
  EXPECT_EQ(predict_ovr(m, dense({1})).label, "x");
}

TEST(Ovr, ParallelEqualsSerial) {
  std::mt19937_64 rng(8);
  const auto inst = oracle::random_instance(rng, 40, 4);
  std::vector<std::string> y;
  for (size_t i = 0; i < inst.x.size(); ++i) y.push_back(std::string(1, char('a' + i % 4)));
  const auto a = train_ovr(inst.x, y, TrainConfig{});
  const auto b = train_ovr_serial(inst.x, y, TrainConfig{});
  ASSERT_EQ(a.models.size(), b.models.size());
  for (size_t k = 0; k < a.models.size(); ++k) {
    EXPECT_EQ(a.models[k].weights, b.models[k].weights);
    EXPECT_EQ(a.models[k].bias, b.models[k].bias);
  }
}

TEST(Svr, ConstantTargets) {
  std::mt19937_64 rng(3);
  const auto inst = oracle::random_instance(rng, 20, 3);
  const std::vector<double> t(inst.x.size(), 0.2);
  TrainConfig cfg = tight();
  cfg.epsilon = 0.1;
  const auto m = train_svr(inst.x, t, cfg);
  EXPECT_GE(m.bias, 0.1 - 1e-9);
  EXPECT_LE(m.bias, 0.3);
  double se = 0.0;
  for (size_t i = 0; i < t.size(); ++i) se += std::pow(m.margin(inst.x[i]) - t[i], 2);
  EXPECT_LE(std::sqrt(se / double(t.size())), 0.1 + 1e-9);
}

TEST(Svr, WideTubeGivesZeroModel) {
  std::mt19937_64 rng(4);
  const auto inst = oracle::random_instance(rng, 20, 3);
  std::vector<double> t;
  for (size_t i = 0; i < inst.x.size(); ++i) t.push_back(i % 2 ? 0.15 : -0.15);
  TrainConfig cfg = tight();
  cfg.epsilon = 0.2;
  const auto m = train_svr(inst.x, t, cfg);
  for (double w : m.weights) EXPECT_EQ(w, 0.0);
  EXPECT_EQ(m.bias, 0.0);
  double se = 0.0;
  for (double v : t) se += v * v;
  // The best constant for symmetric targets is 0.
  EXPECT_NEAR(std::sqrt(se / double(t.size())), 0.15, 1e-12);
}

TEST(Svr, SingleSampleWithinTube) {
  const std::vector<SparseVector> x = {dense({0.5, -0.25})};
  const std::vector<double> t = {0.4};
  TrainConfig cfg = tight(10.0);
  cfg.epsilon = 0.05;
  const auto m = train_svr(x, t, cfg);
  EXPECT_LE(std::abs(m.margin(x[0]) - 0.4), 0.05 + 1e-9);
}

TEST(Svr, ObjectiveNonIncreasingAndDeterministic) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = oracle::random_instance(rng, 20, 3);
    std::vector<double> t;
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (size_t i = 0; i < inst.x.size(); ++i) t.push_back(u(rng));
    TrainTrace trace;
    TrainConfig cfg;
    cfg.epochs = 200;
    const auto a = train_svr(inst.x, t, cfg, &trace);
    for (size_t e = 1; e < trace.primal.size(); ++e)
      EXPECT_LE(trace.primal[e], trace.primal[e - 1] + 1e-9) << trial << " " << e;
    const auto b = train_svr(inst.x, t, cfg);
    EXPECT_EQ(a.weights, b.weights);
  }
}

TEST(Traits, TrainPredictClampAndErrors) {
  std::mt19937_64 rng(14);
  const auto inst = oracle::random_instance(rng, 12, 3);
  std::vector<TraitVector> t(inst.x.size(), TraitVector{0.1, -0.2, 0.0, 0.3, -0.4});
  const auto m = train_traits(inst.x, t, tight());
  const auto s = train_traits_serial(inst.x, t, tight());
  for (size_t k = 0; k < kNumTraits; ++k) {
    EXPECT_EQ(m.weights[k], s.weights[k]);
    EXPECT_EQ(m.bias[k], s.bias[k]);
  }
  TraitRegressor r;
  for (auto& w : r.weights) w = {1.0, 0.0};
  r.bias = {0.0, 0.2, -0.1, 0.0, 0.0};
  auto p = predict_traits(r, dense({0, 0}));
  EXPECT_EQ(p, (TraitVector{0.0, 0.2, -0.1, 0.0, 0.0}));
  p = predict_traits(r, dense({0.9, 0}));
  EXPECT_EQ(p[0], 0.5);
  p = predict_traits(r, dense({-0.6, 0}));
  EXPECT_EQ(p[0], -0.5);
  EXPECT_THROW(predict_traits(r, dense({1, 2, 3})), DataError);
  t[0][2] = 0.7;
  EXPECT_THROW(train_traits(inst.x, t, tight()), DataError);
}
