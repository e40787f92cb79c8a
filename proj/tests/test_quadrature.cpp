#include <gtest/gtest.h>

#include <cmath>

#include "blockfade/quadrature.hpp"

using namespace blockfade;

TEST(Quadrature, PolynomialIsExact) {
  auto r = integrate([](double x) { return 3 * x * x; }, 0.0, 2.0);
  EXPECT_NEAR(r.value, 8.0, 1e-14);
}

TEST(Quadrature, SmoothPeriodic) {
  // Bessel I0(1) * 2pi.
  auto r = integrate([](double x) { return std::exp(std::cos(x)); }, -kPi, kPi);
  EXPECT_NEAR(r.value, kTwoPi * std::cyl_bessel_i(0.0, 1.0), 1e-12);
}

TEST(Quadrature, BreakpointsHandleJumps) {
  auto step = [](double x) { return x < 0.3 ? 1.0 : 5.0; };
  auto r = integrate(step, 0.0, 1.0, {0.3});
  EXPECT_NEAR(r.value, 0.3 + 0.7 * 5.0, 1e-14);
  EXPECT_LE(r.panels, 16);
}

TEST(Quadrature, IntegrableLogSingularity) {
  auto r = integrate([](double x) { return std::log(x); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, -1.0, 1e-9);
}

TEST(Quadrature, ReportsAchievedError) {
  auto r = integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 2.0 / 3.0, 1e-9);
  EXPECT_GT(r.error, 0.0);
  EXPECT_LT(r.error, 1e-8);
}

TEST(Quadrature, PanelCapThrowsWithEstimate) {
  QuadOptions o;
  o.max_panels = 64;
  o.rel_tol = 1e-15;
  try {
    integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {}, o);
    FAIL() << "expected ToleranceNotMet";
  } catch (const ToleranceNotMet& e) {
    EXPECT_NEAR(e.estimate(), 2.0, 0.1);
    EXPECT_GT(e.achieved(), 0.0);
  }
}

TEST(Quadrature, NonFiniteIntegrandThrows) {
  EXPECT_THROW(integrate([](double) { return std::nan(""); }, 0.0, 1.0), ToleranceNotMet);
}

TEST(Quadrature, SerialAndParallelBitIdentical) {
  auto f = [](double x) { return std::log(1.0 + 10.0 * std::abs(std::sin(3 * x))); };
  QuadOptions s, p;
  s.exec = Exec::serial;
  p.exec = Exec::parallel;
  auto a = integrate(f, -kPi, kPi, {}, s);
  auto b = integrate(f, -kPi, kPi, {}, p);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.panels, b.panels);
}

TEST(Quadrature, EmptyIntervalIsZero) {
  EXPECT_EQ(integrate([](double) { return 1.0; }, 1.0, 1.0).value, 0.0);
}
