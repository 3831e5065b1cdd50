#include <gtest/gtest.h>

#include <cmath>

#include "lmtpsi/sensitivity.hpp"

using namespace lmtpsi;

namespace {
const double mhz = phys::two_pi * 1e6;

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}
}  // namespace

TEST(Beta, Values) {
  const auto sp = rb87();
  const auto b0 = beta_and_efficiency(0, 1e6, sp);
  EXPECT_DOUBLE_EQ(b0.beta, 0.0);
  EXPECT_DOUBLE_EQ(b0.efficiency, 1.0);
  EXPECT_DOUBLE_EQ(b0.area, phys::pi);
  EXPECT_NEAR(beta_and_efficiency(100, 10 * mhz, sp).beta, 0.091, 0.001);
  const double w = sp.recoil_rate() / std::sqrt(0.1);
  const auto b = beta_and_efficiency(1, w, sp);
  EXPECT_NEAR(b.beta, 0.1, 1e-12);
  EXPECT_NEAR(b.efficiency, 1.0 / 1.1, 1e-12);
  EXPECT_NEAR(b.area, phys::pi / std::sqrt(1.1), 1e-12);
  EXPECT_THROW(beta_and_efficiency(1, 0.0, sp), Error);
}

TEST(PeakHeight, Baselines) {
  const auto sp = rb87();
  EXPECT_DOUBLE_EQ(peak_height_model(1, 1e7, 0.0, HeightMode::exact, sp).h, 0.25);
  EXPECT_NEAR(peak_height_model(1, 1e7, 0.0, HeightMode::leading_order, sp).h, 0.25, 1e-4);
  const double w = sp.recoil_rate() / std::sqrt(0.1);
  EXPECT_NEAR(peak_height_model(3, w, 0.0, HeightMode::exact, sp).h, 0.25 * std::pow(1.0 / 1.1, 4), 1e-12);
  EXPECT_NEAR(0.25 * std::pow(1.0 / 1.1, 4), 0.171, 0.001);
}

TEST(PeakHeight, EvenOrderRejected) { EXPECT_THROW(peak_height_model(2, 1e7, 0.0, HeightMode::exact, rb87()), Error); }

TEST(PeakHeight, LeadingOrderValidityGate) {
  const auto sp = rb87();
  try {
    peak_height_model(61, 1 * mhz, 0.0, HeightMode::leading_order, sp);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::approximation_validity);
  }
  EXPECT_NO_THROW(peak_height_model(61, 1 * mhz, 0.0, HeightMode::exact, sp));
}

TEST(PeakHeight, ExactAndLeadingOrderAgreeAlongOptimalCurves) {
  const auto sp = rb87();
  for (double rabi : {100 * mhz, 200 * mhz}) {
    for (int n = 1; n <= 199; n += 2) {
      const double d = optimal_detuning(n, rabi, sp);
      const double w = rabi * rabi / (2.0 * d);
      const double g = sp.linewidth * w / (2.0 * d);
      if (beta_and_efficiency((n - 1) / 2, w, sp).beta > 0.1 || phys::pi * g / w > 0.02) continue;
      const double le = peak_height_model(n, w, g, HeightMode::exact, sp).log_h;
      const double ll = peak_height_model(n, w, g, HeightMode::leading_order, sp).log_h;
      EXPECT_LE(std::abs(le - ll) / std::abs(le), 0.02) << "N = " << n;
    }
  }
}

TEST(Improvement, Values) {
  const auto sp = rb87();
  EXPECT_NEAR(improvement_factor(1, 100 * mhz, 500 * mhz, sp), 0.981, 0.001);
  EXPECT_NEAR(improvement_factor(69, 200 * mhz, 1700 * mhz, sp), 39.0, 1.0);
  EXPECT_LT(improvement_factor(69, 200 * mhz, 1e5 * mhz, sp), 1e-6);
  EXPECT_THROW(improvement_factor(4, 200 * mhz, 1700 * mhz, sp), Error);
  EXPECT_THROW(improvement_factor(3, 200 * mhz, 0.0, sp), Error);
}

TEST(Improvement, SingleOrderApproachesOneFromBelow) {
  const auto sp = rb87();
  double prev = 0.0;
  for (double d : {1e3, 1e4, 1e5}) {
    const double e = improvement_factor(1, 1e6 * mhz, d * mhz, sp);
    EXPECT_LT(e, 1.0);
    EXPECT_GT(e, prev);
    prev = e;
  }
  EXPECT_GT(prev, 0.999);
}

TEST(Optimum, DetuningMaximisesImprovement) {
  const auto sp = rb87();
  for (int n : {3, 21, 69}) {
    const double d = optimal_detuning(n, 200 * mhz, sp);
    const double e = log_improvement_factor(n, 200 * mhz, d, sp);
    EXPECT_LT(log_improvement_factor(n, 200 * mhz, 0.98 * d, sp), e);
    EXPECT_LT(log_improvement_factor(n, 200 * mhz, 1.02 * d, sp), e);
    EXPECT_NEAR(e, log_improvement_at_optimum(n, 200 * mhz, sp), 1e-12);
  }
  EXPECT_NEAR(optimal_detuning(69, 200 * mhz, sp) / (1700 * mhz), 1.0, 0.05);
}

TEST(Optimum, Prefactors) {
  const auto sp = rb87();
  EXPECT_NEAR(max_improvement_prefactor(sp), 0.56, 0.02);
  EXPECT_NEAR(optimal_order_prefactor(sp), 1.0, 0.05);
  EXPECT_NEAR(max_improvement(100 * mhz, sp), 22.0, 1.0);
  EXPECT_NEAR(optimal_order(100 * mhz, sp), 40.0, 2.0);
}

TEST(Optimum, ClosedFormMatchesContinuousMaximum) {
  const auto sp = rb87();
  for (double rabi : {50 * mhz, 200 * mhz, 400 * mhz}) {
    double best = -1e300;
    for (double n = 1.0; n < 400.0; n += 0.01) best = std::max(best, log_improvement_at_optimum(n, rabi, sp));
    EXPECT_NEAR(std::exp(best) / max_improvement(rabi, sp), 1.0, 0.005);
  }
}

TEST(Optimum, ScalingLawExponent) {
  const auto sp = rb87();
  std::vector<double> x, e, n;
  for (double f : {50.0, 100.0, 200.0, 400.0}) {
    x.push_back(f * mhz);
    e.push_back(max_improvement(f * mhz, sp));
    n.push_back(optimal_order(f * mhz, sp));
  }
  EXPECT_NEAR(slope(x, e), 0.8, 0.01);
  EXPECT_NEAR(slope(x, n), 0.8, 0.01);
}

TEST(Optimum, Params) {
  const auto sp = rb87();
  const auto p = optimal_params(200 * mhz, sp);
  EXPECT_NEAR(p.epsilon_max, 39.0, 2.0);
  EXPECT_EQ(p.n_opt_odd % 2, 1);
  EXPECT_LE(std::abs(p.n_opt_odd - p.n_opt), 1.0);
  const auto q = optimal_params(200 * mhz, sp, 69);
  EXPECT_EQ(q.n, 69);
  EXPECT_NEAR(q.detuning / (1700 * mhz), 1.0, 0.05);
  EXPECT_THROW(optimal_params(200 * mhz, sp, 70), Error);
}

TEST(Optimum, NearestOdd) {
  EXPECT_EQ(nearest_odd(0.3), 1);
  EXPECT_EQ(nearest_odd(1.9), 1);
  EXPECT_EQ(nearest_odd(2.1), 3);
  EXPECT_EQ(nearest_odd(71.7), 71);
  EXPECT_EQ(nearest_odd(72.2), 73);
}

TEST(Scan, OrderingAndOptimumOfCurves) {
  const auto sp = rb87();
  const auto c200 = scan_improvement(1, 199, 200 * mhz, sp);
  const auto c100 = scan_improvement(1, 199, 100 * mhz, sp);
  EXPECT_NEAR(c200.epsilon_max, 39.0, 2.0);
  EXPECT_LE(std::abs(c200.n_opt - 69), 2);
  EXPECT_LE(std::abs(c200.n_opt - optimal_order(200 * mhz, sp)), 2.0);
  EXPECT_LE(std::abs(c100.n_opt - optimal_order(100 * mhz, sp)), 2.0);
  ASSERT_EQ(c200.n.size(), 100u);
  for (std::size_t i = 1; i < c200.n.size(); ++i) EXPECT_LT(c100.epsilon[i], c200.epsilon[i]);
}

TEST(Scan, CurvePositiveAndUnimodal) {
  const auto sp = rb87();
  for (double f : {20.0, 100.0, 200.0, 400.0}) {
    const auto c = scan_improvement(1, 399, f * mhz, sp);
    int turns = 0;
    for (std::size_t i = 0; i < c.epsilon.size(); ++i) {
      EXPECT_GT(c.epsilon[i], 0.0);
      if (i >= 2 && (c.epsilon[i - 1] - c.epsilon[i - 2]) > 0 && (c.epsilon[i] - c.epsilon[i - 1]) < 0) ++turns;
      if (i >= 2 && (c.epsilon[i - 1] - c.epsilon[i - 2]) < 0) {
        EXPECT_LT(c.epsilon[i], c.epsilon[i - 1]);
      }
    }
    EXPECT_LE(turns, 1);
  }
}

TEST(Scan, FixedDetuningPolicy) {
  const auto sp = rb87();
  const auto c = scan_improvement(1, 21, 100 * mhz, sp, DetuningPolicy::fixed, 500 * mhz);
  for (double d : c.detuning) EXPECT_DOUBLE_EQ(d, 500 * mhz);
  EXPECT_NEAR(c.epsilon.front(), 0.981, 0.001);
  EXPECT_THROW(scan_improvement(1, 21, 100 * mhz, sp, DetuningPolicy::fixed, 0.0), Error);
  EXPECT_THROW(scan_improvement(9, 3, 100 * mhz, sp), Error);
}
