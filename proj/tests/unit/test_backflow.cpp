#include <gtest/gtest.h>

#include <cmath>

#include "backflow/backflow.hpp"
#include "backflow/error.hpp"

using namespace backflow;

TEST(NegativePart, Values) {
  EXPECT_DOUBLE_EQ(negative_part(-0.3), 0.3);
  EXPECT_EQ(negative_part(0.5), 0.0);
  EXPECT_EQ(negative_part(0.0), 0.0);
}

TEST(DetectIntervals, PositiveCurrentHasNone) {
  const auto r = detect_intervals([](double) { return 1.0; }, 5.0, 64, 1e-6);
  EXPECT_TRUE(r.intervals.empty());
  EXPECT_EQ(r.total_amount, 0.0);
  EXPECT_EQ(r.first_duration, 0.0);
  EXPECT_FALSE(r.open_end);
}

TEST(DetectIntervals, CosineHasTwoIntervals) {
  const auto r = detect_intervals([](double t) { return std::cos(2.0 * kPi * t); }, 2.0, 128, 1e-9);
  ASSERT_EQ(r.intervals.size(), 2u);
  EXPECT_NEAR(r.intervals[0].start, 0.25, 1e-9);
  EXPECT_NEAR(r.intervals[0].end, 0.75, 1e-9);
  EXPECT_NEAR(r.intervals[1].start, 1.25, 1e-9);
  EXPECT_NEAR(r.amounts[0], 1.0 / kPi, 1e-8);
  EXPECT_NEAR(r.total_amount, 2.0 / kPi, 2e-8);
  EXPECT_NEAR(r.first_duration, 0.5, 2e-9);
  EXPECT_NEAR(r.peak, 1.0, 1e-3);
  for (double a : r.amounts) EXPECT_GE(a, 0.0);
}

TEST(DetectIntervals, IntervalFromOriginAndOpenEnd) {
  const auto r = detect_intervals([](double t) { return t - 0.5; }, 1.0, 64, 1e-8);
  ASSERT_EQ(r.intervals.size(), 1u);
  EXPECT_EQ(r.intervals[0].start, 0.0);
  EXPECT_NEAR(r.intervals[0].end, 0.5, 1e-8);
  EXPECT_NEAR(r.first_amount, 0.125, 1e-9);

  const auto open = detect_intervals([](double t) { return 0.5 - t; }, 1.0, 64, 1e-8);
  ASSERT_EQ(open.intervals.size(), 1u);
  EXPECT_TRUE(open.open_end);
  EXPECT_EQ(open.intervals[0].end, 1.0);
  EXPECT_FALSE(open.warnings.empty());
}

TEST(DetectIntervals, NarrowDipDroppedAndQuietStretchWarned) {
  const auto dip = detect_intervals([](double t) { return (t - 0.5) * (t - 0.5) - 1e-14; }, 1.0, 101, 1e-6);
  EXPECT_TRUE(dip.intervals.empty());
  const auto quiet = detect_intervals([](double) { return 0.0; }, 1.0, 64, 1e-6);
  EXPECT_TRUE(quiet.intervals.empty());
  EXPECT_EQ(quiet.warnings.size(), 1u);
}

TEST(DetectIntervals, InvariantUnderSampleDoubling) {
  auto j = [](double t) { return std::sin(7.0 * t) + 0.3 * std::cos(23.0 * t) + 0.1; };
  const auto a = detect_intervals(j, 3.0, 512, 1e-7);
  const auto b = detect_intervals(j, 3.0, 1024, 1e-7);
  ASSERT_EQ(a.intervals.size(), b.intervals.size());
  for (std::size_t k = 0; k < a.intervals.size(); ++k) {
    EXPECT_NEAR(a.intervals[k].start, b.intervals[k].start, 1e-7);
    EXPECT_NEAR(a.intervals[k].end, b.intervals[k].end, 1e-7);
    EXPECT_NEAR(a.amounts[k], b.amounts[k], 1e-8);
  }
}

TEST(DetectIntervals, Contract) {
  auto j = [](double) { return 1.0; };
  EXPECT_THROW(detect_intervals(j, 1.0, 63, 1e-6), ContractViolation);
  EXPECT_THROW(detect_intervals(j, 0.0, 64, 1e-6), ContractViolation);
  EXPECT_THROW(detect_intervals([](double) { return NAN; }, 1.0, 64, 1e-6), DomainError);
}

TEST(ScaledBm, AmountNearlyEpsilonIndependent) {
  const double a1 = backflow_amount_scaled_bm(1.0);
  EXPECT_NEAR(a1, 0.004251, 5e-4);
  EXPECT_NEAR(backflow_amount_scaled_bm(0.5), a1, 0.05 * a1);
  EXPECT_NEAR(backflow_amount_scaled_bm(0.1), a1, 0.05 * a1);
}

TEST(ScaledBm, IntervalGrowsWhilePeakShrinks) {
  double prev_end = 0.0, prev_peak = 1.0;
  for (double eps : {1.0, 0.5, 0.1}) {
    const ScaledCurrent j(bm_state(eps), eps, 0.0, 0.5);
    const auto r = detect_intervals([&](double t) { return j(t); }, 0.5, 1024, 1e-7);
    ASSERT_GE(r.intervals.size(), 1u);
    EXPECT_GT(r.intervals[0].end, prev_end);
    EXPECT_LT(r.peak, prev_peak);
    prev_end = r.intervals[0].end;
    prev_peak = r.peak;
  }
}

TEST(ScaledBm, AmountMatchesProbabilityGain) {
  const auto spec = DensityMatrixSpec::pure(bm_state(1.0));
  const ScaledCurrent j(bm_state(1.0), 1.0, 0.0, 0.1);
  const auto r = detect_intervals([&](double t) { return j(t); }, 0.1, 256, 1e-9);
  ASSERT_EQ(r.intervals.size(), 1u);
  const double t_end = r.intervals[0].end;
  const auto trace = prob_negative_halfspace_numeric(spec, ScaledFree{1.0}, t_end, 2049);
  EXPECT_NEAR(trace.pr.back() - trace.pr.front(), r.total_amount, 1e-6);
}

TEST(Sweep, MilburnSuperpositionIntervalCount) {
  SweepScenario sc;
  sc.state = GaussianSuperposition{14.0, 3.0, 1.9, kPi, 1.0};
  sc.model = Milburn{0.0};
  sc.t_max = 0.25;
  sc.n_samples = 1024;
  const auto rows = sweep(SweepAxis::LambdaInv, {0.0, 0.01}, sc);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].value, 0.0);
  EXPECT_EQ(rows[0].n_intervals, 3u);
  EXPECT_EQ(rows[1].n_intervals, 1u);
  EXPECT_GT(rows[0].first_amount, rows[1].first_amount);
  EXPECT_GT(rows[0].first_duration, rows[1].first_duration);
}

TEST(Sweep, OrderIndependentOfThreads) {
  SweepScenario sc;
  sc.state = BrackenMelloy{1.0};
  sc.model = ScaledCK{1.0, 0.0};
  sc.t_max = 0.1;
  sc.n_samples = 128;
  const std::vector<double> gammas{0.0, 5.0, 10.0, 15.0};
  const auto a = sweep(SweepAxis::Gamma, gammas, sc, Execution{1});
  const auto b = sweep(SweepAxis::Gamma, gammas, sc, Execution{4});
  ASSERT_EQ(a.size(), 4u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].value, gammas[k]);
    EXPECT_EQ(a[k].first_amount, b[k].first_amount);
    EXPECT_EQ(a[k].first_duration, b[k].first_duration);
  }
}

TEST(Sweep, FailureNamesTheValue) {
  SweepScenario sc;
  sc.state = BrackenMelloy{1.0};
  sc.model = ScaledFree{1.0};
  sc.t_max = 0.1;
  sc.n_samples = 64;
  EXPECT_THROW(sweep(SweepAxis::Epsilon, {1.0, 0.5}, sc), ContractViolation);
  try {
    sweep(SweepAxis::Epsilon, {0.0, 1.0}, sc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("epsilon=0"), std::string::npos) << e.what();
  }
  EXPECT_THROW(sweep_model(SweepAxis::LambdaInv, 0.1, ScaledFree{1.0}), ContractViolation);
}
