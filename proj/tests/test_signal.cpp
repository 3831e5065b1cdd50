#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "common.hpp"

using namespace lmtpsi;
using lmtpsi::testing::Scenario;

namespace {
const double mhz = phys::two_pi * 1e6;
}

TEST(Signal, IdealThreePeakStructure) {
  Scenario s;
  const auto pm = s.metrics();
  EXPECT_NEAR(pm.height, 0.25, 0.01);
  EXPECT_NEAR(pm.height / pm.central_height, 0.5, 0.02);
  EXPECT_NEAR(pm.separation, s.k_omega, s.signal().fourier_spacing);
  EXPECT_GE(pm.contrast, 0.0);
  EXPECT_LE(pm.contrast, 1.0);
}

TEST(Signal, IdealSignalIsEnvelopeTimesCosine) {
  Scenario s;
  const auto sig = s.signal();
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < sig.r.size(); ++j) {
    const double expect = sig.total[j] * conventional_signal(sig.r[j], s.k_omega);
    num += std::pow(sig.ground[j] - expect, 2);
    den += std::pow(sig.ground[j], 2);
  }
  EXPECT_LE(std::sqrt(num / den), 0.01);
}

TEST(Signal, NoRotationGivesNoFringes) {
  Scenario s;
  const auto sig = s.signal(0.0);
  for (std::size_t j = 0; j < sig.r.size(); ++j) EXPECT_NEAR(sig.ground[j], sig.total[j], 1e-12 * sig.total[j] + 1e-300);
  try {
    peak_metrics(sig, s.k_omega);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::detection);
  }
}

TEST(Signal, EqualArmsGiveFullContrast) {
  Scenario s;
  const auto sig = s.signal();
  const std::size_t mid = sig.r.size() / 2;
  const double period = phys::two_pi / s.k_omega;
  const auto dark = mid + static_cast<std::size_t>(std::lround(0.5 * period / sig.position_spacing));
  EXPECT_LT(sig.ground[dark] / sig.total[dark], 0.01);
  EXPECT_NEAR(sig.ground[mid] / sig.total[mid], 1.0, 1e-6);
}

TEST(Signal, SpatialSignalRealAndBounded) {
  Scenario s;
  s.ideal = false;
  s.order = 3;
  const auto sig = s.signal();
  for (std::size_t j = 0; j < sig.r.size(); ++j) {
    EXPECT_GE(sig.ground[j], 0.0);
    EXPECT_LE(sig.ground[j], sig.total[j] * (1.0 + 1e-12) + 1e-300);
  }
  const double norm = std::accumulate(sig.total.begin(), sig.total.end(), 0.0) * sig.position_spacing;
  EXPECT_NEAR(norm, 1.0, 1e-6);
}

TEST(Signal, FourierHermitianSymmetry) {
  Scenario s;
  s.ideal = false;
  s.order = 3;
  const auto sig = s.signal();
  const std::size_t mid = sig.fourier.size() / 2;
  for (std::size_t d = 1; d < mid; ++d) {
    EXPECT_NEAR(std::abs(sig.fourier[mid - d] - std::conj(sig.fourier[mid + d])), 0.0, 1e-12);
  }
}

TEST(Signal, Parseval) {
  Scenario s;
  s.ideal = false;
  s.order = 3;
  const auto sig = s.signal();
  double lhs = 0.0, rhs = 0.0;
  for (double v : sig.ground) lhs += v * v;
  lhs *= sig.position_spacing;
  for (const auto& c : sig.fourier) rhs += std::norm(c);
  rhs *= sig.fourier_spacing / phys::two_pi;
  EXPECT_NEAR(lhs, rhs, 1e-9 * lhs);
}

TEST(Signal, SeparationLinearInRotation) {
  Scenario s;
  std::vector<double> x, y;
  for (double f : {0.5, 1.0, 2.0, 3.0, 5.0}) {
    Scenario t = s;
    t.k_omega = f * s.k_omega;
    x.push_back(t.rotation());
    y.push_back(t.metrics().separation);
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double r2 = sxy * sxy / (sxx * syy);
  EXPECT_GE(r2, 0.999);
  const double slope = sxy / sxx;
  EXPECT_NEAR(slope / (s.sp.effective_wavenumber() * s.half_time), 1.0, 0.01);
}

TEST(Signal, GridRefinementConverges) {
  Scenario s;
  s.ideal = false;
  s.order = 3;
  s.rabi = 10.0 * std::sqrt(10.0) * mhz;
  const double h1 = s.metrics().height;
  s.points *= 2;
  const double h2 = s.metrics().height;
  EXPECT_LT(std::abs(h2 - h1) / h1, 0.005);
}

TEST(Signal, WidthScalesInverselyWithExpansion) {
  Scenario s;
  s.points = 32768;
  const double w1 = s.metrics().width;
  s.half_time *= 2.0;
  const double w2 = s.metrics().width;
  EXPECT_NEAR(w2 / w1, 0.5, 0.025);
}

TEST(Signal, LargerTrapNeverIncreasesContrast) {
  Scenario s;
  s.temperature = 0.5e-6;
  s.half_time = 0.6e-3;
  s.points = 16384;
  double prev = 2.0;
  for (double a : {0.1e-6, 0.12e-6, 0.15e-6, 0.2e-6}) {
    s.a = a;
    auto ens = ThermalEnsemble::from_trap_size(a, s.temperature, 1, s.sp);
    int n_max = 1;
    while (n_max < 100 && ens.weights.back() > 1e-6 * ens.weights.front()) {
      n_max += 4;
      ens = ThermalEnsemble::from_trap_size(a, s.temperature, n_max, s.sp);
    }
    const auto grid = MomentumGrid::make(s.points, default_grid_extent(ens, s.sp));
    RunOptions o;
    o.ideal_pulses = true;
    const auto res = run_interferometer(ens, s.sequence(), s.rotation(), s.laser(), s.sp, grid, o);
    const auto pm = peak_metrics(spatial_signal(res, s.sp.mass), s.k_omega);
    EXPECT_LE(pm.contrast, prev + 1e-9) << "a = " << a;
    prev = pm.contrast;
  }
}

TEST(Signal, AliasingIsResolutionError) {
  Scenario s;
  s.points = 256;
  try {
    s.signal();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::resolution);
  }
}

TEST(Signal, HintValidation) {
  Scenario s;
  const auto sig = s.signal();
  EXPECT_THROW(peak_metrics(sig, 0.0), Error);
  try {
    peak_metrics(sig, 1e12);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::resolution);
  }
}

TEST(Signal, ComponentSumMatchesResultPath) {
  Scenario s;
  s.ideal = false;
  s.n_max = 2;
  const auto res = s.run();
  const auto direct = spatial_signal(res, s.sp.mass);
  std::vector<InterferometerResult::Channel> channels;
  std::vector<double> weights;
  for (std::size_t n = 0; n < res.eigenstates.size(); ++n) {
    for (auto& c : res.channels(n, false)) {
      weights.push_back(res.weights[n] * c.weight);
      channels.push_back(std::move(c));
    }
  }
  std::vector<SignalComponent> comps;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    comps.push_back({weights[i], channels[i].j % 2 == 0, &channels[i].state.amplitude});
  }
  const auto summed = spatial_signal(res.grid, comps, res.expansion_time, s.sp.mass);
  double scale = *std::max_element(direct.total.begin(), direct.total.end());
  for (std::size_t j = 0; j < direct.ground.size(); ++j) {
    EXPECT_NEAR(summed.ground[j], direct.ground[j], 1e-12 * scale);
    EXPECT_NEAR(summed.total[j], direct.total[j], 1e-12 * scale);
  }
}

TEST(Decay, ScalesSidePeakOnly) {
  Scenario s;
  const auto sig = s.signal();
  const auto base = peak_metrics(sig, s.k_omega);
  const auto same = apply_decay(sig, 0.0, 0.0);
  EXPECT_EQ(same.ground, sig.ground);
  const auto half = peak_metrics(apply_decay(sig, std::log(2.0), 1.0), s.k_omega);
  EXPECT_NEAR(half.height, 0.5 * base.height, 1e-6 * base.height);
  EXPECT_NEAR(half.central_height, base.central_height, 1e-9);
  const auto pm = apply_decay(base, std::log(2.0) / 3.0, 3.0);
  EXPECT_NEAR(pm.height, 0.5 * base.height, 1e-12);
  EXPECT_DOUBLE_EQ(apply_decay(base, 1e5, 0.0).height, base.height);
  EXPECT_THROW(apply_decay(base, -1.0, 1.0), Error);
}

TEST(Decay, SurvivalForHighRabiThreePulseLadder) {
  const auto sp = rb87();
  const auto laser = LaserParams::symmetric(100 * mhz, 500 * mhz, sp);
  const auto seq = build_lmt_sequence(3, 1e-3, laser, sp);
  const auto d = effective_decay(laser, sp, seq.total_duration);
  EXPECT_NEAR(d.survival(), std::exp(-sp.linewidth / 100.0 * seq.total_duration), 2e-4);
  EXPECT_NEAR(d.survival(), 0.893, 0.002);
}
