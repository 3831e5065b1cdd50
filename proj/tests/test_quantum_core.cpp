#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "lmtpsi/quantum_core.hpp"

using namespace lmtpsi;

namespace {
constexpr double a0 = 0.1e-6;
MomentumGrid grid_for(double a, std::size_t points = 4096) { return MomentumGrid::make(points, 16.0 / a); }
}  // namespace

TEST(Grid, Invariants) {
  for (std::size_t m : {2u, 64u, 4096u}) {
    const auto g = MomentumGrid::make(m, 123.0);
    EXPECT_EQ(g.points, m);
    EXPECT_NEAR(g.extent(), (m - 1) * g.spacing, 1e-12);
    EXPECT_NEAR(g.extent(), 123.0, 1e-12);
    EXPECT_DOUBLE_EQ(g.k(g.zero_index()), 0.0);
    for (std::size_t d = 1; d < m / 2; ++d) EXPECT_DOUBLE_EQ(-g.k(g.zero_index() - d), g.k(g.zero_index() + d));
  }
}

TEST(Grid, RejectsOddOrTinyCounts) {
  for (std::size_t m : {0u, 1u, 3u, 4095u}) {
    try {
      MomentumGrid::make(m, 1.0);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::domain);
    }
  }
}

TEST(Grid, TwoDimensionalIsCapabilityError) {
  try {
    MomentumGrid::make(64, 1.0, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::capability);
  }
}

TEST(Hermite, Values) {
  EXPECT_DOUBLE_EQ(hermite(0, 1.7), 1.0);
  EXPECT_DOUBLE_EQ(hermite(1, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(hermite(3, 2.0), 40.0);
  for (double x : {-1.3, 0.2, 2.5}) EXPECT_NEAR(hermite(3, x), 8 * x * x * x - 12 * x, 1e-12);
  EXPECT_NEAR(hermite(4, 1.5), 16 * std::pow(1.5, 4) - 48 * 1.5 * 1.5 + 12, 1e-10);
}

TEST(Hermite, SupportsAtLeast64AndRejectsBeyondSupport) {
  EXPECT_TRUE(std::isfinite(hermite(64, 0.3)));
  try {
    hermite(hermite_max_order + 1, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::capability);
  }
}

TEST(Eigenstates, GroundStateNormAndWidth) {
  const auto g = grid_for(a0);
  const auto psi = ho_momentum_eigenstate(0, a0, g);
  EXPECT_NEAR(psi.norm(), 1.0, 1e-9);
  double m2 = 0.0;
  for (std::size_t i = 0; i < g.points; ++i) m2 += std::norm(psi.amplitude[i]) * g.k(i) * g.k(i) * g.spacing;
  EXPECT_NEAR(std::sqrt(m2), 1.0 / (a0 * std::sqrt(2.0)), 1e-6 / a0);
}

TEST(Eigenstates, OddStateVanishesAtOrigin) {
  const auto g = grid_for(a0);
  EXPECT_NEAR(std::abs(ho_momentum_eigenstate(1, a0, g).amplitude[g.zero_index()]), 0.0, 1e-15);
}

TEST(Eigenstates, Parity) {
  const auto g = grid_for(a0);
  const auto states = ho_momentum_eigenstates(7, a0, g);
  const std::size_t z = g.zero_index();
  for (int n = 0; n <= 7; ++n) {
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    for (std::size_t d = 1; d < 500; d += 37) {
      EXPECT_NEAR(std::abs(states[n].amplitude[z - d] - sign * states[n].amplitude[z + d]), 0.0, 1e-12);
    }
  }
}

TEST(Eigenstates, Orthonormality) {
  const auto g = grid_for(a0);
  const auto states = ho_momentum_eigenstates(20, a0, g);
  for (int m = 0; m <= 20; ++m) {
    for (int n = m; n <= 20; ++n) {
      const double expect = m == n ? 1.0 : 0.0;
      EXPECT_NEAR(std::abs(overlap(states[m], states[n]) - expect), 0.0, 1e-6) << m << "," << n;
    }
  }
  EXPECT_NEAR(std::abs(overlap(states[0], states[2])), 0.0, 1e-8);
}

TEST(Eigenstates, NarrowGridIsResolutionError) {
  const auto g = MomentumGrid::make(512, 4.0 / a0);
  try {
    ho_momentum_eigenstate(0, a0, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::resolution);
  }
}

TEST(Weights, NormalisedNonNegativeNonIncreasing) {
  const double omega = phys::hbar / (rb87().mass * a0 * a0);
  for (auto mode : {WeightMode::linear_boltzmann, WeightMode::paper_squared}) {
    for (double t : {1e-9, 6e-6, 1e-3}) {
      const auto w = thermal_weights(omega, t, 40, mode);
      EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
      for (std::size_t n = 0; n < w.size(); ++n) {
        EXPECT_GE(w[n], 0.0);
        if (n) {
          EXPECT_LE(w[n], w[n - 1]);
        }
      }
    }
  }
}

TEST(Weights, ZeroTemperatureLimitFreezesOut) {
  const auto w = thermal_weights(1e4, 1e-12, 10);
  EXPECT_DOUBLE_EQ(w[0], 1.0);
  for (std::size_t n = 1; n < w.size(); ++n) EXPECT_EQ(w[n], 0.0);
}

TEST(Weights, SingleState) {
  const auto w = thermal_weights(123.0, 4e-6, 0);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_DOUBLE_EQ(w[0], 1.0);
}

TEST(Weights, GeometricRatioInLinearMode) {
  const double t = 1e-6;
  const double omega = std::log(2.0) * phys::k_boltzmann * t / phys::hbar;
  const auto w = thermal_weights(omega, t, 12, WeightMode::linear_boltzmann);
  for (std::size_t n = 0; n + 1 < w.size(); ++n) EXPECT_NEAR(w[n + 1] / w[n], 0.5, 1e-12);
}

TEST(Weights, StrictModeFlagsTruncatedTail) {
  const double omega = phys::hbar / (rb87().mass * a0 * a0);
  try {
    thermal_weights(omega, 6e-6, 4, WeightMode::linear_boltzmann, true);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::truncation);
  }
  EXPECT_NO_THROW(thermal_weights(omega, 6e-6, 4, WeightMode::linear_boltzmann, false));
}

TEST(Weights, InvalidInputs) {
  EXPECT_THROW(thermal_weights(0.0, 1e-6, 3), Error);
  EXPECT_THROW(thermal_weights(1.0, -1e-6, 3), Error);
  EXPECT_THROW(thermal_weights(1.0, 1e-6, -1), Error);
}

TEST(Ensemble, TrapSizeAndFrequencyAgree) {
  const auto sp = rb87();
  const auto e = ThermalEnsemble::from_trap_size(a0, 6e-6, 5, sp);
  EXPECT_NEAR(e.trap_size, a0, 1e-15);
  const auto f = ThermalEnsemble::from_frequency(e.omega, 6e-6, 5, sp);
  EXPECT_NEAR(f.trap_size, a0, 1e-15);
  EXPECT_EQ(e.weights, f.weights);
}

TEST(FreeEvolution, PhaseProperties) {
  const auto g = grid_for(a0, 256);
  for (auto c : free_evolution_phase(g, 0.0, rb87().mass)) EXPECT_EQ(c, cplx(1.0, 0.0));
  const auto p = free_evolution_phase(g, 3e-3, rb87().mass);
  EXPECT_EQ(p[g.zero_index()], cplx(1.0, 0.0));
  for (auto c : p) EXPECT_NEAR(std::abs(c), 1.0, 1e-12);
  EXPECT_THROW(free_evolution_phase(g, -1.0, rb87().mass), Error);
}

TEST(FreeEvolution, GaussianWidthMatchesAnalytic) {
  const auto sp = rb87();
  const auto g = grid_for(a0);
  const auto psi = ho_momentum_eigenstate(0, a0, g);
  for (double t : {0.0, 1e-4, 1e-3, 2.4e-3}) {
    const auto ph = free_evolution_phase(g, t, sp.mass);
    cvec a(g.points);
    for (std::size_t i = 0; i < g.points; ++i) a[i] = psi.amplitude[i] * ph[i];
    const auto pos = to_position(g, a);
    const double s = phys::hbar * t / (sp.mass * a0 * a0);
    const double expect = a0 * std::sqrt(1.0 + s * s) / std::sqrt(2.0);
    EXPECT_NEAR(pos.rms_width() / expect, 1.0, 0.01) << "t = " << t;
    EXPECT_NEAR(pos.norm(), 1.0, 1e-9);
  }
}
