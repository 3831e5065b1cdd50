#pragma once

// Momentum grids, harmonic-oscillator eigenstates, thermal weights and
// free evolution.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "lmtpsi/constants.hpp"
#include "lmtpsi/error.hpp"
#include "lmtpsi/fft.hpp"

namespace lmtpsi {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

/// k_i = (i - M/2) dk, i = 0..M-1. The k = 0 sample sits at index M/2.
struct MomentumGrid {
  int dimension = 1;
  std::size_t points = 0;
  double spacing = 0.0;  // dk, 1/m

  static MomentumGrid make(std::size_t points, double extent, int dimension = 1) {
    if (dimension == 2) {
      fail(ErrorKind::capability, "2D transverse grids are not implemented; use dimension = 1");
    }
    if (dimension != 1) fail(ErrorKind::domain, "grid dimension must be 1 or 2");
    if (points < 2 || points % 2 != 0) fail(ErrorKind::domain, "grid point count must be even and >= 2");
    if (!(extent > 0.0) || !std::isfinite(extent)) fail(ErrorKind::domain, "grid extent must be positive");
    MomentumGrid g;
    g.dimension = dimension;
    g.points = points;
    g.spacing = extent / static_cast<double>(points - 1);
    return g;
  }

  double extent() const { return spacing * static_cast<double>(points - 1); }
  std::size_t zero_index() const { return points / 2; }
  double k(std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(points / 2)) * spacing;
  }
  std::vector<double> axis() const {
    std::vector<double> out(points);
    for (std::size_t i = 0; i < points; ++i) out[i] = k(i);
    return out;
  }

  // Conjugate position grid of the centred DFT.
  double position_spacing() const { return phys::two_pi / (static_cast<double>(points) * spacing); }
  double r(std::size_t j) const {
    return (static_cast<double>(j) - static_cast<double>(points / 2)) * position_spacing();
  }
  std::vector<double> position_axis() const {
    std::vector<double> out(points);
    for (std::size_t j = 0; j < points; ++j) out[j] = r(j);
    return out;
  }
};

struct MomentumWavefunction {
  MomentumGrid grid;
  cvec amplitude;

  double norm() const {
    double s = 0.0;
    for (const auto& c : amplitude) s += std::norm(c);
    return s * grid.spacing;
  }
};

inline cplx overlap(const MomentumWavefunction& a, const MomentumWavefunction& b) {
  if (a.amplitude.size() != b.amplitude.size()) fail(ErrorKind::domain, "overlap of states on different grids");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.amplitude.size(); ++i) s += std::conj(a.amplitude[i]) * b.amplitude[i];
  return s * a.grid.spacing;
}

// ---------------------------------------------------------------------------
// Hermite polynomials and functions

inline constexpr int hermite_max_order = 128;

/// Physicists' Hermite polynomial H_n(x).
inline double hermite(int n, double x) {
  if (n < 0) fail(ErrorKind::domain, "Hermite order must be non-negative");
  if (n > hermite_max_order) {
    fail(ErrorKind::capability, "Hermite order " + std::to_string(n) + " exceeds supported maximum " +
                                    std::to_string(hermite_max_order));
  }
  if (n == 0) return 1.0;
  double hm1 = 1.0;
  double h = 2.0 * x;
  for (int j = 1; j < n; ++j) {
    const double next = 2.0 * x * h - 2.0 * j * hm1;
    hm1 = h;
    h = next;
  }
  return h;
}

/// Normalised Hermite functions h_0..h_nmax at x, via the stable recurrence
/// h_n = sqrt(2/n) x h_{n-1} - sqrt((n-1)/n) h_{n-2}.
inline std::vector<double> hermite_functions(int n_max, double x) {
  if (n_max < 0) fail(ErrorKind::domain, "Hermite order must be non-negative");
  if (n_max > hermite_max_order) fail(ErrorKind::capability, "Hermite order exceeds supported maximum");
  std::vector<double> h(static_cast<std::size_t>(n_max) + 1);
  h[0] = std::pow(phys::pi, -0.25) * std::exp(-0.5 * x * x);
  if (n_max >= 1) h[1] = std::sqrt(2.0) * x * h[0];
  for (int n = 2; n <= n_max; ++n) {
    h[n] = std::sqrt(2.0 / n) * x * h[n - 1] - std::sqrt((n - 1.0) / n) * h[n - 2];
  }
  return h;
}

/// Momentum-space eigenstates phi_n(k) = sqrt(a) h_n(k a), n = 0..n_max,
/// each renormalised on the grid.
inline std::vector<MomentumWavefunction> ho_momentum_eigenstates(int n_max, double a, const MomentumGrid& grid) {
  if (!(a > 0.0)) fail(ErrorKind::domain, "trap size must be positive");
  if (grid.extent() < 8.0 / a) {
    fail(ErrorKind::resolution, "grid extent must be at least 8/a to hold the oscillator states");
  }
  std::vector<MomentumWavefunction> out(static_cast<std::size_t>(n_max) + 1);
  for (auto& wf : out) {
    wf.grid = grid;
    wf.amplitude.assign(grid.points, 0.0);
  }
  const double sa = std::sqrt(a);
  for (std::size_t i = 0; i < grid.points; ++i) {
    const auto h = hermite_functions(n_max, grid.k(i) * a);
    for (int n = 0; n <= n_max; ++n) out[n].amplitude[i] = sa * h[n];
  }
  for (int n = 0; n <= n_max; ++n) {
    const double nrm = out[n].norm();
    if (nrm < 0.999) {
      fail(ErrorKind::resolution, "grid captures only " + std::to_string(nrm) + " of eigenstate n=" +
                                      std::to_string(n) + "; widen the momentum extent");
    }
    const double s = 1.0 / std::sqrt(nrm);
    for (auto& c : out[n].amplitude) c *= s;
  }
  return out;
}

inline MomentumWavefunction ho_momentum_eigenstate(int n, double a, const MomentumGrid& grid) {
  if (n < 0) fail(ErrorKind::domain, "eigenstate index must be non-negative");
  return std::move(ho_momentum_eigenstates(n, a, grid)[static_cast<std::size_t>(n)]);
}

// ---------------------------------------------------------------------------
// Thermal ensemble

enum class WeightMode { linear_boltzmann, paper_squared };

inline const char* to_string(WeightMode m) {
  return m == WeightMode::linear_boltzmann ? "linear-boltzmann" : "paper-squared";
}

inline WeightMode weight_mode_from_string(const std::string& s) {
  if (s == "linear-boltzmann") return WeightMode::linear_boltzmann;
  if (s == "paper-squared") return WeightMode::paper_squared;
  fail(ErrorKind::configuration, "unknown weight mode '" + s + "' (linear-boltzmann | paper-squared)");
}

/// Normalised occupation weights for n = 0..n_max.
/// linear-boltzmann: exp[-hbar w (n+1/2) / kT].
/// paper-squared:    exp[-(hbar w (n+1/2))^2 / kT], SI units taken literally.
/// In strict mode a tail weight above 1e-3 w_0 is a truncation error.
inline std::vector<double> thermal_weights(double omega, double temperature, int n_max,
                                           WeightMode mode = WeightMode::linear_boltzmann, bool strict = false) {
  if (!(omega > 0.0) || !std::isfinite(omega)) fail(ErrorKind::domain, "trap frequency must be positive");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) fail(ErrorKind::domain, "temperature must be positive");
  if (n_max < 0) fail(ErrorKind::domain, "n_max must be non-negative");
  const double e = phys::hbar * omega;
  const double kt = phys::k_boltzmann * temperature;
  std::vector<double> logw(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    const double en = e * (n + 0.5);
    // Offsets relative to n = 0 keep the exponentials finite as T -> 0.
    logw[n] = mode == WeightMode::linear_boltzmann ? -(en - 0.5 * e) / kt : -(en * en - 0.25 * e * e) / kt;
  }
  std::vector<double> w(logw.size());
  double sum = 0.0;
  for (std::size_t n = 0; n < w.size(); ++n) sum += (w[n] = std::exp(logw[n]));
  for (auto& x : w) x /= sum;
  if (strict && n_max > 0 && w.back() > 1e-3 * w.front()) {
    fail(ErrorKind::truncation, "thermal tail weight w_nmax/w_0 = " + std::to_string(w.back() / w.front()) +
                                    " exceeds 1e-3; raise n_max");
  }
  return w;
}

struct ThermalEnsemble {
  double omega = 0.0;        // trap frequency, rad/s
  double trap_size = 0.0;    // a = sqrt(hbar / m w), m
  double temperature = 0.0;  // K
  int n_max = 0;
  WeightMode mode = WeightMode::linear_boltzmann;
  std::vector<double> weights;

  static ThermalEnsemble from_trap_size(double a, double temperature, int n_max, const AtomSpecies& species,
                                        WeightMode mode = WeightMode::linear_boltzmann, bool strict = false) {
    if (!(a > 0.0) || !std::isfinite(a)) fail(ErrorKind::domain, "trap size must be positive");
    return from_frequency(phys::hbar / (species.mass * a * a), temperature, n_max, species, mode, strict);
  }

  static ThermalEnsemble from_frequency(double omega, double temperature, int n_max, const AtomSpecies& species,
                                        WeightMode mode = WeightMode::linear_boltzmann, bool strict = false) {
    ThermalEnsemble e;
    e.weights = thermal_weights(omega, temperature, n_max, mode, strict);
    e.omega = omega;
    e.trap_size = std::sqrt(phys::hbar / (species.mass * omega));
    e.temperature = temperature;
    e.n_max = n_max;
    e.mode = mode;
    return e;
  }
};

/// Momentum extent large enough for the ensemble's highest eigenstate and
/// for the thermal momentum spread.
inline double default_grid_extent(const ThermalEnsemble& ens, const AtomSpecies& species) {
  const double a = ens.trap_size;
  const double thermal = 8.0 * species.thermal_wavenumber(ens.temperature);
  const double turning = 2.0 * (std::sqrt(2.0 * ens.n_max + 1.0) + 6.0) / a;
  return std::max({16.0 / a, thermal, turning});
}

inline MomentumGrid default_grid(const ThermalEnsemble& ens, const AtomSpecies& species, std::size_t points = 4096) {
  return MomentumGrid::make(points, default_grid_extent(ens, species));
}

// ---------------------------------------------------------------------------
// Free evolution and the position representation

/// exp(-i hbar k^2 t / 2m) on every grid point.
inline cvec free_evolution_phase(const MomentumGrid& grid, double t, double mass) {
  if (!(t >= 0.0) || !std::isfinite(t)) fail(ErrorKind::domain, "evolution time must be non-negative");
  cvec out(grid.points);
  const double c = phys::hbar * t / (2.0 * mass);
  for (std::size_t i = 0; i < grid.points; ++i) {
    const double k = grid.k(i);
    const double ph = -c * k * k;
    out[i] = cplx(std::cos(ph), std::sin(ph));
  }
  return out;
}

struct PositionWavefunction {
  std::vector<double> r;
  cvec amplitude;
  double spacing = 0.0;

  double norm() const {
    double s = 0.0;
    for (const auto& c : amplitude) s += std::norm(c);
    return s * spacing;
  }

  double rms_width() const {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) {
      const double p = std::norm(amplitude[j]);
      s0 += p;
      s1 += p * r[j];
      s2 += p * r[j] * r[j];
    }
    const double mean = s1 / s0;
    return std::sqrt(std::max(0.0, s2 / s0 - mean * mean));
  }
};

/// psi(r) = (1/sqrt(2 pi)) int dk e^{ikr} psi(k), sampled on the conjugate grid.
inline PositionWavefunction to_position(const MomentumGrid& grid, const cvec& amplitude) {
  PositionWavefunction out;
  out.amplitude = fft::centered_dft(amplitude, +1);
  const double s = grid.spacing / std::sqrt(phys::two_pi);
  for (auto& c : out.amplitude) c *= s;
  out.r = grid.position_axis();
  out.spacing = grid.position_spacing();
  return out;
}

inline PositionWavefunction to_position(const MomentumWavefunction& wf) { return to_position(wf.grid, wf.amplitude); }

}  // namespace lmtpsi
