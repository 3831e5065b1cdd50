#pragma once

// Physical constants, species data and laser-parameter bookkeeping.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "lmtpsi/error.hpp"

namespace lmtpsi {

namespace phys {
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double hbar = 1.054571817e-34;        // J s (CODATA 2018, exact)
inline constexpr double k_boltzmann = 1.380649e-23;    // J/K (SI 2019, exact)
inline constexpr double speed_of_light = 299792458.0;  // m/s
}  // namespace phys

// Squared relative transition strengths, normalised to the reduced D2
// dipole matrix element. The "upper" path runs through the F'=2
// intermediate level, the "lower" path through F'=1.
struct RamanMatrixElements {
  double cycling = 0.0;  // |F=2,mF=2> -> |F'=3,mF'=3>
  double upper_ground_leg = 0.0;
  double upper_excited_leg = 0.0;
  double lower_ground_leg = 0.0;
  double lower_excited_leg = 0.0;
};

struct AtomSpecies {
  std::string name;
  double mass = 0.0;              // kg
  double linewidth = 0.0;         // Gamma, rad/s
  double wavelength = 0.0;        // single-photon wavelength, m
  double decay_to_ground = 0.0;   // Gamma_{i->g}, rad/s
  double decay_to_excited = 0.0;  // Gamma_{i->e}, rad/s
  // Intensity (W/cm^2) for which the cycling transition has Omega_0 = Gamma.
  double cycling_reference_intensity = 0.0;
  std::optional<RamanMatrixElements> matrix_elements;

  double wavenumber() const { return phys::two_pi / wavelength; }
  double effective_wavenumber() const { return 2.0 * wavenumber(); }

  /// omega_r = hbar k_eff^2 / m, the Doppler-ladder frequency step.
  double recoil_rate() const {
    const double keff = effective_wavenumber();
    return phys::hbar * keff * keff / mass;
  }

  /// sqrt(m k_B T)/hbar, the thermal momentum spread in wavenumber units.
  double thermal_wavenumber(double temperature) const {
    return std::sqrt(mass * phys::k_boltzmann * temperature) / phys::hbar;
  }
};

/// 87Rb D2 line. Mass and wavelength from Steck, "Rubidium 87 D Line Data"
/// (rev. 2.2); linewidth rounded to 2pi x 6.0 MHz; the F'=2 intermediate
/// level is taken to decay equally to both ground hyperfine levels.
inline AtomSpecies rb87() {
  AtomSpecies s;
  s.name = "rb87";
  s.mass = 1.443160648e-25;
  s.linewidth = phys::two_pi * 6.0e6;
  s.wavelength = 780.241209686e-9;
  s.decay_to_ground = 0.5 * s.linewidth;
  s.decay_to_excited = 0.5 * s.linewidth;
  s.cycling_reference_intensity = 3.34e-3;
  // sigma+ strengths (Steck table 9): cycling 1/2; |1,0>->|2',1> 1/8,
  // |2,0>->|2',1> 1/8; |1,0>->|1',1> 5/24, |2,0>->|1',1> 1/120.
  s.matrix_elements = RamanMatrixElements{0.5, 1.0 / 8.0, 1.0 / 8.0, 5.0 / 24.0, 1.0 / 120.0};
  return s;
}

inline AtomSpecies species_by_name(const std::string& name) {
  if (name == "rb87" || name == "Rb87" || name == "87Rb") return rb87();
  fail(ErrorKind::configuration, "unknown species '" + name + "'");
}

// ---------------------------------------------------------------------------
// Intensity <-> one-photon Rabi frequency.
//
// Omega_0 = Gamma * sqrt(s * I / I_ref), where I_ref is the cycling-transition
// intensity giving Omega_0 = Gamma and s is the Raman path strength relative
// to the cycling transition (product of leg amplitudes over the cycling
// strength). The ~157 MHz splitting of the intermediate levels is ignored.

enum class Transition { cycling, upper_raman, both_raman };

enum class ConversionDirection { to_rabi, to_intensity };

inline const RamanMatrixElements& require_matrix_elements(const AtomSpecies& species) {
  if (!species.matrix_elements) {
    fail(ErrorKind::configuration, "species '" + species.name + "' has no Raman matrix-element table");
  }
  return *species.matrix_elements;
}

inline double transition_strength(const AtomSpecies& species, Transition transition) {
  if (transition == Transition::cycling) return 1.0;
  const auto& me = require_matrix_elements(species);
  const double upper = std::sqrt(me.upper_ground_leg * me.upper_excited_leg);
  const double lower = std::sqrt(me.lower_ground_leg * me.lower_excited_leg);
  const double path = transition == Transition::upper_raman ? upper : upper + lower;
  return path / me.cycling;
}

/// Ratio of the upper to the lower Raman path's effective Rabi frequency.
inline double raman_path_ratio(const AtomSpecies& species) {
  const auto& me = require_matrix_elements(species);
  const double lower = std::sqrt(me.lower_ground_leg * me.lower_excited_leg);
  if (lower <= 0.0) fail(ErrorKind::configuration, "lower Raman path has zero strength");
  return std::sqrt(me.upper_ground_leg * me.upper_excited_leg) / lower;
}

/// Intensity in W/cm^2 to Omega_0 in rad/s.
inline double intensity_to_rabi(double intensity, Transition transition, const AtomSpecies& species) {
  if (!(intensity > 0.0) || !std::isfinite(intensity)) {
    fail(ErrorKind::domain, "intensity must be positive and finite");
  }
  const double s = transition_strength(species, transition);
  return species.linewidth * std::sqrt(s * intensity / species.cycling_reference_intensity);
}

/// Omega_0 in rad/s to intensity in W/cm^2.
inline double rabi_to_intensity(double rabi, Transition transition, const AtomSpecies& species) {
  if (!(rabi > 0.0) || !std::isfinite(rabi)) {
    fail(ErrorKind::domain, "Rabi frequency must be positive and finite");
  }
  const double s = transition_strength(species, transition);
  const double x = rabi / species.linewidth;
  return species.cycling_reference_intensity * x * x / s;
}

inline double intensity_rabi_convert(double value, ConversionDirection direction, Transition transition,
                                     const AtomSpecies& species) {
  return direction == ConversionDirection::to_rabi ? intensity_to_rabi(value, transition, species)
                                                   : rabi_to_intensity(value, transition, species);
}

inline const char* to_string(Transition t) {
  switch (t) {
    case Transition::cycling: return "cycling";
    case Transition::upper_raman: return "upper-raman";
    case Transition::both_raman: return "both-raman";
  }
  return "cycling";
}

inline Transition transition_from_string(const std::string& s) {
  if (s == "cycling") return Transition::cycling;
  if (s == "upper-raman" || s == "upper") return Transition::upper_raman;
  if (s == "both-raman" || s == "both") return Transition::both_raman;
  fail(ErrorKind::configuration, "unknown transition '" + s + "' (cycling | upper-raman | both-raman)");
}

// ---------------------------------------------------------------------------

/// Raman beam pair. Detunings follow delta_0 = delta_g0 - delta_e0 and
/// Delta_0 = (delta_g0 + delta_e0)/2.
struct LaserParams {
  double rabi_ground = 0.0;          // Omega_1, rad/s
  double rabi_excited = 0.0;         // Omega_2, rad/s
  double one_photon_detuning = 0.0;  // Delta_0, rad/s
  double two_photon_detuning = 0.0;  // delta_0, rad/s
  int direction = +1;                // sign of (k_1 - k_2) along the beam axis
  bool include_light_shift = true;
  double regime_ratio = 5.0;         // require |Delta~_0| >= ratio * Omega_0
  double regime_slack = 0.01;        // relative tolerance on that threshold

  /// Omega_1 = Omega_2 = rabi, recoil-compensated delta_0.
  static LaserParams symmetric(double rabi, double detuning, const AtomSpecies& species) {
    LaserParams p;
    p.rabi_ground = rabi;
    p.rabi_excited = rabi;
    p.one_photon_detuning = detuning;
    p.compensate_recoil(species);
    return p;
  }

  static LaserParams from_leg_detunings(double rabi_1, double rabi_2, double delta_g0, double delta_e0) {
    LaserParams p;
    p.rabi_ground = rabi_1;
    p.rabi_excited = rabi_2;
    p.one_photon_detuning = 0.5 * (delta_g0 + delta_e0);
    p.two_photon_detuning = delta_g0 - delta_e0;
    return p;
  }

  double delta_g0() const { return one_photon_detuning + 0.5 * two_photon_detuning; }
  double delta_e0() const { return one_photon_detuning - 0.5 * two_photon_detuning; }

  /// Common one-photon Rabi frequency (geometric mean when the legs differ).
  double rabi() const { return std::sqrt(rabi_ground * rabi_excited); }

  /// delta_0 = hbar (k_1 - k_2)^2 / 2m.
  static double recoil_compensation(const AtomSpecies& species) { return 0.5 * species.recoil_rate(); }

  LaserParams& compensate_recoil(const AtomSpecies& species) {
    two_photon_detuning = recoil_compensation(species);
    return *this;
  }
};

}  // namespace lmtpsi
