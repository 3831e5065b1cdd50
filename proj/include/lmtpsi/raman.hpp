#pragma once

// Raman coupling: effective two-level reduction, off-resonant decay, the
// two-level pulse propagator and a direct three-level integrator.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "lmtpsi/constants.hpp"
#include "lmtpsi/error.hpp"

namespace lmtpsi {

struct EffectiveTwoLevel {
  double rabi = 0.0;                 // Omega_eff, rad/s
  double doppler = 0.0;              // delta_k = hbar k s k_eff / m, rad/s
  double detuning_tilde = 0.0;       // Delta~_0, rad/s
  double light_shift_ground = 0.0;   // rad/s
  double light_shift_excited = 0.0;  // rad/s
  // Propagator detuning E_g - E_e of the coupled pair (including light
  // shifts when enabled), rad/s.
  double detuning = 0.0;
};

/// Delta~_0 = Delta_0 - hbar (k + s k_L)^2 / 2m.
inline double detuning_tilde(double k, const LaserParams& laser, const AtomSpecies& species) {
  const double q = k + laser.direction * species.wavenumber();
  return laser.one_photon_detuning - phys::hbar * q * q / (2.0 * species.mass);
}

inline void check_regime(double dt, const LaserParams& laser) {
  const double omax = std::max(std::abs(laser.rabi_ground), std::abs(laser.rabi_excited));
  // The relative slack keeps operating points placed exactly on the
  // threshold valid once the small recoil shift of Delta~_0 is included.
  if (!(std::abs(dt) >= (1.0 - laser.regime_slack) * laser.regime_ratio * omax)) {
    fail(ErrorKind::regime, "|Delta~_0| = " + std::to_string(std::abs(dt)) + " rad/s is below " +
                                std::to_string(laser.regime_ratio) + " x Omega_0 = " +
                                std::to_string(laser.regime_ratio * omax) + " rad/s");
  }
}

/// Adiabatically eliminated coupling between |g,k> and |e,k + s k_eff>.
inline EffectiveTwoLevel effective_two_level(double k, const LaserParams& laser, const AtomSpecies& species) {
  EffectiveTwoLevel e;
  e.detuning_tilde = detuning_tilde(k, laser, species);
  check_regime(e.detuning_tilde, laser);
  const double keff = species.effective_wavenumber();
  const double s = laser.direction;
  e.rabi = laser.rabi_ground * laser.rabi_excited / (2.0 * e.detuning_tilde);
  e.light_shift_ground = laser.rabi_ground * laser.rabi_ground / (4.0 * e.detuning_tilde);
  e.light_shift_excited = laser.rabi_excited * laser.rabi_excited / (4.0 * e.detuning_tilde);
  e.doppler = phys::hbar * k * s * keff / species.mass;
  e.detuning = laser.two_photon_detuning - e.doppler - 0.5 * species.recoil_rate();
  if (laser.include_light_shift) e.detuning += e.light_shift_ground - e.light_shift_excited;
  return e;
}

// ---------------------------------------------------------------------------

struct DecayModel {
  double rate = 0.0;             // Gamma_eff, rad/s
  double ground_to_excited = 0.0;
  double excited_to_ground = 0.0;
  double duration = 0.0;         // total pulse exposure tau, s

  double survival() const { return std::exp(-rate * duration); }
};

/// Gamma_eff = Gamma Omega_0^2 / 4 Delta~_0^2 evaluated at k = 0.
inline DecayModel effective_decay(const LaserParams& laser, const AtomSpecies& species, double duration) {
  if (!(duration >= 0.0) || !std::isfinite(duration)) fail(ErrorKind::domain, "pulse duration must be non-negative");
  const double dt = detuning_tilde(0.0, laser, species);
  check_regime(dt, laser);
  const double x = laser.rabi_ground * laser.rabi_excited / (4.0 * dt * dt);
  DecayModel d;
  d.ground_to_excited = species.decay_to_excited * x;
  d.excited_to_ground = species.decay_to_ground * x;
  d.rate = d.ground_to_excited + d.excited_to_ground;
  d.duration = duration;
  return d;
}

inline DecayModel effective_decay(const LaserParams& laser, const AtomSpecies& species,
                                  const std::vector<double>& durations) {
  double total = 0.0;
  for (double t : durations) {
    if (!(t >= 0.0)) fail(ErrorKind::domain, "pulse duration must be non-negative");
    total += t;
  }
  return effective_decay(laser, species, total);
}

// ---------------------------------------------------------------------------

/// exp(-i H t) for H = [[delta/2, Omega/2], [Omega/2, -delta/2]], basis (g, e).
inline Eigen::Matrix2cd pulse_propagator(double rabi, double delta, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) fail(ErrorKind::domain, "pulse duration must be non-negative");
  using C = std::complex<double>;
  const double wp = std::hypot(rabi, delta);
  Eigen::Matrix2cd u;
  if (wp == 0.0) return Eigen::Matrix2cd::Identity();
  const double c = std::cos(0.5 * wp * t);
  const double s = std::sin(0.5 * wp * t);
  const C off(0.0, -(rabi / wp) * s);
  u(0, 0) = C(c, -(delta / wp) * s);
  u(1, 1) = C(c, (delta / wp) * s);
  u(0, 1) = off;
  u(1, 0) = off;
  return u;
}

/// |<e|U|g>|^2 = (Omega/Omega')^2 sin^2(Omega' t / 2).
inline double transfer_probability(double rabi, double delta, double t) {
  return std::norm(pulse_propagator(rabi, delta, t)(1, 0));
}

// ---------------------------------------------------------------------------
// Three-level reference integrator, basis (g, i, e), energies in rad/s.

inline Eigen::Matrix3cd three_level_hamiltonian(double k, const LaserParams& laser, const AtomSpecies& species) {
  const double s = laser.direction;
  const double k1 = s * species.wavenumber();
  const double k2 = -k1;
  const double c = phys::hbar / (2.0 * species.mass);
  Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
  h(0, 0) = c * k * k + 0.5 * laser.two_photon_detuning;
  h(1, 1) = c * (k + k1) * (k + k1) - laser.one_photon_detuning;
  h(2, 2) = c * (k + k1 - k2) * (k + k1 - k2) - 0.5 * laser.two_photon_detuning;
  h(0, 1) = h(1, 0) = 0.5 * laser.rabi_ground;
  h(1, 2) = h(2, 1) = 0.5 * laser.rabi_excited;
  return h;
}

inline double three_level_max_step(const LaserParams& laser) {
  const double scale = std::max({std::abs(laser.rabi_ground), std::abs(laser.rabi_excited),
                                 std::abs(laser.one_photon_detuning)});
  return scale > 0.0 ? 0.01 / scale : std::numeric_limits<double>::infinity();
}

struct ThreeLevelSample {
  double t = 0.0;
  Eigen::Vector3cd state;
};

struct ThreeLevelTrajectory {
  std::vector<ThreeLevelSample> samples;
  double max_intermediate_population = 0.0;
};

/// Fixed-step RK4 on i dc/dt = H c. For constant H each step is the
/// degree-4 Taylor polynomial of exp(-i H h), so it is built once.
/// Records `sample_count` evenly spaced states (plus t = 0) when > 0.
inline ThreeLevelTrajectory integrate_three_level_trajectory(const Eigen::Vector3cd& initial, double k,
                                                             const LaserParams& laser, const AtomSpecies& species,
                                                             double t, double step, int sample_count = 0) {
  if (!(t >= 0.0) || !std::isfinite(t)) fail(ErrorKind::domain, "integration time must be non-negative");
  if (!(step > 0.0)) fail(ErrorKind::domain, "step must be positive");
  const double limit = three_level_max_step(laser);
  if (step > limit) {
    fail(ErrorKind::resolution, "step " + std::to_string(step) + " s exceeds 0.01/max(Omega, Delta) = " +
                                    std::to_string(limit) + " s");
  }
  const auto nsteps = static_cast<long long>(std::ceil(t / step));
  const double h = nsteps > 0 ? t / static_cast<double>(nsteps) : 0.0;

  const Eigen::Matrix3cd a = std::complex<double>(0.0, -h) * three_level_hamiltonian(k, laser, species);
  const Eigen::Matrix3cd a2 = a * a;
  const Eigen::Matrix3cd a3 = a2 * a;
  const Eigen::Matrix3cd a4 = a3 * a;
  const Eigen::Matrix3cd m = Eigen::Matrix3cd::Identity() + a + a2 / 2.0 + a3 / 6.0 + a4 / 24.0;

  ThreeLevelTrajectory out;
  Eigen::Vector3cd c = initial;
  out.max_intermediate_population = std::norm(c(1));
  long long next_sample = 0;
  auto record = [&](long long i) {
    out.samples.push_back({h * static_cast<double>(i), c});
  };
  if (sample_count > 0) {
    record(0);
    next_sample = 1;
  }
  for (long long i = 1; i <= nsteps; ++i) {
    c = m * c;
    out.max_intermediate_population = std::max(out.max_intermediate_population, std::norm(c(1)));
    if (sample_count > 0 && i * sample_count >= next_sample * nsteps) {
      record(i);
      ++next_sample;
    }
  }
  if (!c.allFinite()) fail(ErrorKind::numerical_integrity, "three-level integration produced non-finite values");
  if (sample_count <= 0) out.samples.push_back({t, c});
  return out;
}

inline Eigen::Vector3cd integrate_three_level(const Eigen::Vector3cd& initial, double k, const LaserParams& laser,
                                              const AtomSpecies& species, double t, double step) {
  return integrate_three_level_trajectory(initial, k, laser, species, t, step).samples.back().state;
}

/// Largest |P_e(3-level) - P_e(2-level)| over a pi pulse starting in |g,k>.
inline double elimination_error(double k, const LaserParams& laser, const AtomSpecies& species,
                                double step_fraction = 0.5, int samples = 400) {
  const auto e = effective_two_level(k, laser, species);
  const double t = phys::pi / std::abs(e.rabi);
  const Eigen::Vector3cd g(1.0, 0.0, 0.0);
  const auto traj = integrate_three_level_trajectory(g, k, laser, species, t,
                                                     step_fraction * three_level_max_step(laser), samples);
  double worst = 0.0;
  for (const auto& s : traj.samples) {
    const double p3 = std::norm(s.state(2));
    const double p2 = transfer_probability(e.rabi, e.detuning, s.t);
    worst = std::max(worst, std::abs(p3 - p2));
  }
  return worst;
}

}  // namespace lmtpsi
