#include <gtest/gtest.h>

#include <cmath>

#include "olpack/harness.hpp"
#include "test_support.hpp"

namespace olpack {
namespace {

using testing::e1;

TEST(GenSynthetic, ZeroFraction) {
  const std::size_t n = 500;
  const auto inst = gen_synthetic(n, 0.01, 42);
  ASSERT_EQ(inst.m, n);
  ASSERT_EQ(inst.n(), n);
  std::size_t nonzero = 0;
  for (const auto& c : inst.columns) nonzero += c.coeffs.size();
  const double total = static_cast<double>(n * n);
  const double zeros = total - static_cast<double>(nonzero);
  EXPECT_NEAR(zeros, total * 0.01, 3 * std::sqrt(total * 0.01 * 0.99));
}

TEST(GenSynthetic, EntryLawAndShape) {
  const auto inst = gen_synthetic(40, 0.01, 3, 25);
  EXPECT_EQ(inst.m, 25u);
  EXPECT_EQ(inst.n(), 40u);
  for (double b : inst.b) {
    EXPECT_GT(b, 0.0);
    EXPECT_LE(b, 1.0);
  }
  for (const auto& c : inst.columns) {
    EXPECT_TRUE(c.piece.is_linear());
    EXPECT_EQ(c.piece.linear_weight(), 1.0);
    for (const auto& e : c.coeffs) {
      EXPECT_GE(e.value, 0.01);
      EXPECT_LE(e.value, 1.0);
    }
  }
}

TEST(GenSynthetic, HighEllRedrawsEmptyColumns) {
  const auto inst = gen_synthetic(6, 0.999, 5);
  EXPECT_TRUE(validate_instance(inst).empty());
  for (const auto& c : inst.columns)
    for (const auto& e : c.coeffs) EXPECT_GE(e.value, 0.999);
}

TEST(GenSynthetic, DeterministicAndErrors) {
  EXPECT_EQ(gen_synthetic(30, 0.01, 7).dense(), gen_synthetic(30, 0.01, 7).dense());
  EXPECT_EQ(gen_synthetic(30, 0.01, 7).b, gen_synthetic(30, 0.01, 7).b);
  EXPECT_NE(gen_synthetic(30, 0.01, 7).b, gen_synthetic(30, 0.01, 8).b);
  EXPECT_THROW(gen_synthetic(0, 0.01, 1), ConfigError);
  EXPECT_THROW(gen_synthetic(3, 1.0, 1), ConfigError);
}

TEST(ScaleToFeasible, Examples) {
  const auto inst = e1();
  auto s = scale_to_feasible(std::vector<double>{3, 0}, inst);
  EXPECT_DOUBLE_EQ(s.scale, 1.5);
  EXPECT_EQ(s.x, (std::vector<double>{2, 0}));
  s = scale_to_feasible(std::vector<double>{1, 0}, inst);
  EXPECT_EQ(s.scale, 1.0);
  EXPECT_EQ(s.x, (std::vector<double>{1, 0}));
  s = scale_to_feasible(std::vector<double>{0, 0}, inst);
  EXPECT_EQ(s.scale, 1.0);
}

TEST(ScaleToFeasible, NormalizeStretchesFeasiblePoints) {
  const auto inst = e1();
  auto s = scale_to_feasible(std::vector<double>{1, 0}, inst, ScaleMode::normalize);
  EXPECT_DOUBLE_EQ(s.scale, 0.5);
  EXPECT_EQ(s.x, (std::vector<double>{2, 0}));
  s = scale_to_feasible(std::vector<double>{0, 0}, inst, ScaleMode::normalize);
  EXPECT_EQ(s.scale, 1.0);
}

TEST(RatioAfterScaling, Examples) {
  const auto inst = e1();
  EXPECT_EQ(ratio_after_scaling(std::vector<double>{2, 0}, inst, 2.0).value, 1.0);
  EXPECT_EQ(ratio_after_scaling(std::vector<double>{1, 0}, inst, 2.0).value, 0.5);
  EXPECT_EQ(ratio_after_scaling(std::vector<double>{3, 0}, inst, 2.0).value, 1.0);
  EXPECT_EQ(ratio_after_scaling(std::vector<double>{1, 0}, inst, 2.0, ScaleMode::normalize).value, 1.0);
  EXPECT_TRUE(ratio_after_scaling(std::vector<double>{1, 0}, inst, 0.0).degenerate);
}

TEST(ExperimentConfig, Validation) {
  ExperimentConfig cfg;
  EXPECT_EQ(cfg.n, 500u);
  EXPECT_EQ(cfg.trials, 1000u);
  EXPECT_NO_THROW(cfg.validate());
  cfg.p_grid = {1.5};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.trials = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.subroutine.name = "nope";
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.beta = FixedBeta{0.5};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.n = 3;
  cfg.perturb_count = 10;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

ExperimentConfig small() {
  ExperimentConfig cfg;
  cfg.n = 12;
  cfg.trials = 6;
  cfg.p_grid = {0.0, 0.5, 1.0};
  cfg.horizon = 3;
  cfg.seed = 99;
  return cfg;
}

TEST(Replacement, ShapeAndEndpoints) {
  const auto rows = run_experiment_replacement(small());
  ASSERT_EQ(rows.size(), 9u);
  EXPECT_EQ(rows[0].arm, "advice");
  EXPECT_EQ(rows[0].key, 0.0);
  EXPECT_DOUBLE_EQ(lookup_mean(rows, 0.0, "advice"), 1.0);
  EXPECT_EQ(lookup_mean(rows, 1.0, "advice"), 0.0);
  // zero advice halves the subroutine; normalization cancels the half
  EXPECT_NEAR(lookup_mean(rows, 1.0, "switching"), lookup_mean(rows, 1.0, "subroutine"), 1e-12);
  EXPECT_GT(lookup_mean(rows, 1.0, "switching"), 0.0);
  for (const auto& r : rows) EXPECT_EQ(r.trials, 6u);
}

TEST(Replacement, ThreadCountDoesNotChangeResults) {
  auto cfg = small();
  const auto serial = run_experiment_replacement(cfg);
  cfg.threads = 3;
  const auto parallel = run_experiment_replacement(cfg);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t k = 0; k < serial.size(); ++k) {
    EXPECT_EQ(serial[k].mean, parallel[k].mean);
    EXPECT_EQ(serial[k].stderr_, parallel[k].stderr_);
  }
}

TEST(Dynamic, ShapeAndStartingStep) {
  const auto rows = run_experiment_dynamic(small());
  ASSERT_EQ(rows.size(), 4u * 4u);
  EXPECT_EQ(lookup_mean(rows, 0.0, "batch"), lookup_mean(rows, 0.0, "online"));
}

TEST(Dynamic, NoPerturbationIsStationary) {
  auto cfg = small();
  cfg.perturb_count = 0;
  const auto rows = run_experiment_dynamic(cfg);
  for (const auto& arm : dynamic_arms())
    for (std::size_t t = 1; t <= cfg.horizon; ++t)
      EXPECT_EQ(lookup_mean(rows, static_cast<double>(t), arm), lookup_mean(rows, 0.0, arm)) << arm;
}

TEST(Dynamic, ThreadCountDoesNotChangeResults) {
  auto cfg = small();
  const auto serial = run_experiment_dynamic(cfg);
  cfg.threads = 4;
  const auto parallel = run_experiment_dynamic(cfg);
  for (std::size_t k = 0; k < serial.size(); ++k) EXPECT_EQ(serial[k].mean, parallel[k].mean);
}

TEST(ForEachTrial, PropagatesFailure) {
  EXPECT_THROW(for_each_trial(10, 3,
                              [](std::size_t t) {
                                if (t == 4) throw NumericError("boom");
                              }),
               NumericError);
}

TEST(Stats, MeanAndStderr) {
  EXPECT_EQ(mean_of({1, 2, 3}), 2.0);
  EXPECT_NEAR(stderr_of({1, 2, 3}), 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_EQ(stderr_of({5}), 0.0);
}

}  // namespace
}  // namespace olpack
