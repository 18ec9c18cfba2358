#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "diqkd/thresholds.hpp"
#include "oracles.hpp"

using namespace diqkd;

TEST(Bisect, FindsRootEitherOrientation) {
  const auto up = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0);
  EXPECT_NEAR(up.midpoint(), std::sqrt(2.0), 1e-9);
  EXPECT_GE(up.positive * up.positive - 2.0, 0.0);
  const auto down = bisect([](double x) { return 2.0 - x * x; }, 0.0, 2.0);
  EXPECT_NEAR(down.midpoint(), std::sqrt(2.0), 1e-9);
}

TEST(Bisect, Failures) {
  EXPECT_THROW(bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0), numerical_failure);
  EXPECT_THROW(bisect([](double x) { return x - 0.3; }, 0.0, 1.0, {1e-30, 20}), numerical_failure);
}

TEST(CriticalAccuracy, ThreeParty) {
  EXPECT_NEAR(critical_accuracy(3), 0.945449, 1e-6);
  EXPECT_NEAR(critical_accuracy(3), 0.945449359070170, 1e-14);
}

TEST(CriticalAccuracy, FourPartyBisectionMatchesClosedForm) {
  const auto b = critical_accuracy_bisection(4, {1e-10, 200});
  EXPECT_NEAR(b.midpoint(), 0.958502021602336, 1e-9);
  EXPECT_NEAR(critical_accuracy(4), 0.958502021602336, 1e-14);
}

TEST(CriticalAccuracy, MonotoneTowardOne) {
  for (int n = 4; n <= 40; ++n) {
    EXPECT_GT(critical_accuracy(n), critical_accuracy(n - 1));
    EXPECT_LT(critical_accuracy(n), 1.0);
  }
  EXPECT_THROW(critical_accuracy(2), dimension_error);
}

TEST(ThresholdAccuracy, ThreeParty) {
  EXPECT_NEAR(threshold_accuracy(3), 0.958968, 1e-5);
  EXPECT_NEAR(threshold_accuracy(3), 0.958968047485, 1e-9);
  // Reduction (2p-1)^3 = sqrt2/(2 sqrt2 - 1).
  EXPECT_NEAR(kZeroRateParityBias, 0.773459080339014, 1e-14);
  EXPECT_NEAR(threshold_accuracy_closed_form(3), 0.958968047485, 1e-11);
}

TEST(ThresholdAccuracy, FourParty) {
  EXPECT_NEAR(threshold_accuracy(4), 0.968899036058, 1e-9);
}

TEST(ThresholdAccuracy, IterationCap) {
  EXPECT_THROW(threshold_accuracy(3, {1e-9, 5}), numerical_failure);
}

TEST(ThresholdsTable, ThreeToTen) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = thresholds_table(3, 10);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 5.0);
  ASSERT_EQ(rows.size(), 8U);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].n, static_cast<int>(i) + 3);
    EXPECT_GT(rows[i].p_th, rows[i].p_cr);
    EXPECT_EQ(rows[i].p_cr_method, Method::closed_form);
    EXPECT_EQ(rows[i].p_th_method, Method::bisection);
    EXPECT_LE(rows[i].tolerance, 1e-9);
    if (i > 0) {
      EXPECT_GT(rows[i].p_cr, rows[i - 1].p_cr);
      EXPECT_GT(rows[i].p_th, rows[i - 1].p_th);
    }
  }
}

TEST(ThresholdsTable, SingleRow) {
  const auto rows = thresholds_table(3, 3);
  ASSERT_EQ(rows.size(), 1U);
  EXPECT_NEAR(rows[0].p_cr, 0.945449, 1e-6);
  EXPECT_NEAR(rows[0].p_th, 0.958968, 1e-5);
  EXPECT_THROW(thresholds_table(4, 3), domain_error);
  EXPECT_THROW(thresholds_table(2, 3), domain_error);
}

TEST(ThresholdProperty, OrderingAndClosedFormAgreement) {
  for (int n = 3; n <= 10; ++n) {
    const auto r = threshold_report(n);
    EXPECT_GT(r.p_th - r.p_cr, 0.0);
    EXPECT_GT(r.p_cr, 0.94);
    EXPECT_LT(r.p_th, 1.0);
    EXPECT_NEAR(r.p_th, r.p_th_closed_form, 1e-8);
    EXPECT_NEAR(critical_accuracy_bisection(n).midpoint(), r.p_cr, 1e-8);
    EXPECT_NEAR(std::pow(2 * r.p_th - 1, n), kZeroRateParityBias, 1e-8);
  }
}

TEST(ThresholdProperty, DegradedSiViolatesExactlyAboveCriticalAccuracy) {
  for (int n : {3, 4, 5}) {
    const double p_cr = critical_accuracy(n);
    for (double p : oracle::grid(0.5, 1.0, 997)) {
      if (std::abs(p - p_cr) < 1e-12) continue;
      EXPECT_EQ(degraded_si_value(Accuracy(p), n) > 0.75, p > p_cr) << n << " " << p;
    }
  }
}

TEST(WernerBoundary, PerfectMeasurement) {
  const auto b = werner_boundary({1.0});
  ASSERT_TRUE(b[0].v_threshold.has_value());
  EXPECT_NEAR(*b[0].v_threshold, 0.773460, 1e-4);
  EXPECT_NEAR(*b[0].v_threshold, kZeroRateParityBias, 1e-8);
}

TEST(WernerBoundary, TouchesFullVisibilityAtGhzThreshold) {
  const double p_th = threshold_accuracy(3);
  const auto b = werner_boundary({p_th});
  ASSERT_TRUE(b[0].v_threshold.has_value());
  EXPECT_NEAR(*b[0].v_threshold, 1.0, 1e-4);
}

TEST(WernerBoundary, NoPositiveRateBelowThreshold) {
  const auto b = werner_boundary({0.6, 0.9, 0.95, 0.9589});
  for (const auto& pt : b) EXPECT_FALSE(pt.v_threshold.has_value()) << pt.p;
  EXPECT_THROW(werner_boundary({0.5}), domain_error);
}

TEST(WernerBoundary, SatisfiesAlgebraicReduction) {
  for (double p : oracle::grid(0.96, 1.0, 41)) {
    const auto b = werner_boundary({p});
    ASSERT_TRUE(b[0].v_threshold.has_value());
    EXPECT_NEAR(*b[0].v_threshold * std::pow(2 * p - 1, 3), kZeroRateParityBias, 1e-8);
  }
}
