#pragma once

// Spatial fringes after free expansion, their Fourier transform and the
// peak metrics used to quantify rotation sensitivity.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "lmtpsi/constants.hpp"
#include "lmtpsi/error.hpp"
#include "lmtpsi/fft.hpp"
#include "lmtpsi/interferometer.hpp"
#include "lmtpsi/quantum_core.hpp"

namespace lmtpsi {

struct InterferometerSignal {
  std::vector<double> r;       // m
  std::vector<double> ground;  // <P_g(r)>, 1/m
  std::vector<double> total;   // ground + excited density, 1/m
  double position_spacing = 0.0;
  std::vector<double> k;       // Fourier axis k~, 1/m
  cvec fourier;                // P~_g(k~), dimensionless
  double fourier_spacing = 0.0;
  double expansion_time = 0.0;  // 2T, s
};

/// Weighted incoherent component of the final state.
struct SignalComponent {
  double weight = 0.0;
  bool ground = true;
  const cvec* amplitude = nullptr;
};

namespace detail {

/// |psi(r)|^2 after free flight for `t`, psi(r) from the momentum amplitudes.
inline std::vector<double> expanded_density(const MomentumGrid& grid, const cvec& amplitude, const cvec& phase) {
  cvec a(grid.points);
  for (std::size_t i = 0; i < grid.points; ++i) a[i] = amplitude[i] * phase[i];
  const auto pos = to_position(grid, a);
  std::vector<double> d(grid.points);
  for (std::size_t j = 0; j < grid.points; ++j) d[j] = std::norm(pos.amplitude[j]);
  return d;
}

inline void check_aliasing(const std::vector<double>& density) {
  const double peak = *std::max_element(density.begin(), density.end());
  const std::size_t m = density.size();
  double edge = 0.0;
  for (std::size_t j : {std::size_t{0}, std::size_t{1}, m - 2, m - 1}) edge = std::max(edge, density[j]);
  if (peak > 0.0 && edge > 1e-3 * peak) {
    fail(ErrorKind::resolution, "cloud reaches the edge of the position grid (edge/peak = " +
                                    std::to_string(edge / peak) + "); reduce the momentum spacing");
  }
}

}  // namespace detail

inline InterferometerSignal make_axes(const MomentumGrid& grid, double expansion_time) {
  InterferometerSignal s;
  s.r = grid.position_axis();
  s.position_spacing = grid.position_spacing();
  s.k = grid.axis();
  s.fourier_spacing = grid.spacing;
  s.expansion_time = expansion_time;
  s.ground.assign(grid.points, 0.0);
  s.total.assign(grid.points, 0.0);
  return s;
}

/// P~_g(k~) = int dr e^{-i k~ r} <P_g(r)>, filled into `signal.fourier`.
inline void fourier_signal(InterferometerSignal& signal) {
  for (double v : signal.ground) {
    if (!std::isfinite(v)) fail(ErrorKind::numerical_integrity, "non-finite spatial signal");
  }
  signal.fourier = fft::centered_dft(signal.ground, -1);
  for (auto& c : signal.fourier) c *= signal.position_spacing;
}

/// Sum of weighted expanded densities; components are transformed in
/// parallel and reduced in input order.
inline InterferometerSignal spatial_signal(const MomentumGrid& grid, const std::vector<SignalComponent>& components,
                                           double expansion_time, double mass, bool check_aliasing = true) {
  auto sig = make_axes(grid, expansion_time);
  const auto phase = free_evolution_phase(grid, expansion_time, mass);
  std::vector<std::vector<double>> dens(components.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t c = 0; c < components.size(); ++c) {
    dens[c] = detail::expanded_density(grid, *components[c].amplitude, phase);
  }
  for (std::size_t c = 0; c < components.size(); ++c) {
    const double w = components[c].weight;
    for (std::size_t j = 0; j < grid.points; ++j) {
      const double v = w * dens[c][j];
      sig.total[j] += v;
      if (components[c].ground) sig.ground[j] += v;
    }
  }
  if (check_aliasing) detail::check_aliasing(sig.total);
  fourier_signal(sig);
  return sig;
}

/// <P_g(r)> = sum_n w_n sum_{q, j even} w_q |F[psi_n c_qj e^{-i hbar k^2 2T / 2m}]|^2.
inline InterferometerSignal spatial_signal(const InterferometerResult& res, double mass, bool check_aliasing = true) {
  const auto& grid = res.grid;
  auto sig = make_axes(grid, res.expansion_time);
  const auto phase = free_evolution_phase(grid, res.expansion_time, mass);
  const std::size_t nn = res.eigenstates.size();
  std::vector<std::vector<double>> ground(nn), total(nn);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t n = 0; n < nn; ++n) {
    ground[n].assign(grid.points, 0.0);
    total[n].assign(grid.points, 0.0);
    if (res.weights[n] == 0.0) continue;
    cvec a(grid.points);
    for (std::size_t q = 0; q < res.node_weight.size(); ++q) {
      for (int j = res.j_min; j <= res.j_max; ++j) {
        const auto& t = res.channel(q, j);
        for (std::size_t i = 0; i < grid.points; ++i) a[i] = res.eigenstates[n].amplitude[i] * t[i];
        const auto d = detail::expanded_density(grid, a, phase);
        const double w = res.node_weight[q];
        const bool g = detail::is_ground(j);
        for (std::size_t i = 0; i < grid.points; ++i) {
          total[n][i] += w * d[i];
          if (g) ground[n][i] += w * d[i];
        }
      }
    }
  }
  for (std::size_t n = 0; n < nn; ++n) {
    for (std::size_t i = 0; i < grid.points; ++i) {
      sig.ground[i] += res.weights[n] * ground[n][i];
      sig.total[i] += res.weights[n] * total[n][i];
    }
  }
  if (check_aliasing) detail::check_aliasing(sig.total);
  fourier_signal(sig);
  return sig;
}

// ---------------------------------------------------------------------------

struct PeakMetrics {
  double height = 0.0;          // h = |P~_g| at the side peak
  double width = 0.0;           // FWHM, 1/m
  double separation = 0.0;      // side-peak position = measured k_Omega, 1/m
  double central_height = 0.0;  // |P~_g(0)|
  double contrast = 0.0;        // 2h / |P~_g(0)|
  double spurious_ratio = 0.0;  // largest other off-centre peak / h
};

namespace detail {

/// Local maximum of `a` nearest to `i0` within `+-window` bins.
inline std::size_t local_peak(const std::vector<double>& a, std::size_t i0, std::size_t window) {
  const std::size_t lo = i0 > window ? i0 - window : 1;
  const std::size_t hi = std::min(a.size() - 2, i0 + window);
  std::size_t best = lo;
  for (std::size_t i = lo; i <= hi; ++i) {
    if (a[i] > a[best]) best = i;
  }
  return best;
}

/// Gaussian (log-parabola) interpolation through three samples; returns
/// the fractional offset and writes the interpolated height.
inline double log_parabola(double am, double a0, double ap, double& height) {
  height = a0;
  if (!(am > 0.0 && a0 > 0.0 && ap > 0.0)) return 0.0;
  const double lm = std::log(am), l0 = std::log(a0), lp = std::log(ap);
  const double den = lm - 2.0 * l0 + lp;
  if (!(den < 0.0)) return 0.0;
  const double d = std::clamp(0.5 * (lm - lp) / den, -0.5, 0.5);
  height = std::exp(l0 - 0.25 * (lm - lp) * d);
  return d;
}

inline double crossing(const std::vector<double>& a, std::size_t i, int dir, double level, double dk) {
  // Walk from the peak until the magnitude drops below `level`.
  std::size_t j = i;
  while (true) {
    const std::size_t next = dir > 0 ? j + 1 : j - 1;
    if (next == 0 || next >= a.size() - 1) return static_cast<double>(next) * dk;
    if (a[next] < level) {
      const double f = (a[j] - level) / (a[j] - a[next]);
      return (static_cast<double>(j) + dir * f) * dk;
    }
    j = next;
  }
}

}  // namespace detail

/// Metrics of the side peak nearest to `k_hint` (> 0).
inline PeakMetrics peak_metrics(const InterferometerSignal& signal, double k_hint) {
  if (signal.fourier.empty()) fail(ErrorKind::domain, "Fourier signal not computed");
  if (!(k_hint > 0.0)) fail(ErrorKind::domain, "expected fringe wavenumber must be positive");
  const std::size_t m = signal.fourier.size();
  const std::size_t mid = m / 2;
  const double dk = signal.fourier_spacing;
  std::vector<double> a(m);
  for (std::size_t i = 0; i < m; ++i) a[i] = std::abs(signal.fourier[i]);

  PeakMetrics pm;
  pm.central_height = a[mid];
  const double hint_bins = k_hint / dk;
  if (hint_bins > static_cast<double>(mid) - 3.0) {
    fail(ErrorKind::resolution, "expected fringe wavenumber lies outside the Fourier grid");
  }
  const auto i0 = mid + static_cast<std::size_t>(std::lround(hint_bins));
  const auto window = static_cast<std::size_t>(std::max(3.0, 0.25 * hint_bins));
  const std::size_t ip = detail::local_peak(a, i0, window);
  double h = 0.0;
  const double d = detail::log_parabola(a[ip - 1], a[ip], a[ip + 1], h);
  if (!(h >= 1e-6)) {
    fail(ErrorKind::detection, "no side peak above the noise floor near k = " + std::to_string(k_hint) + " 1/m");
  }
  pm.height = h;
  pm.separation = (static_cast<double>(ip) - static_cast<double>(mid) + d) * dk;
  const double left = detail::crossing(a, ip, -1, 0.5 * h, dk);
  const double right = detail::crossing(a, ip, +1, 0.5 * h, dk);
  pm.width = right - left;
  pm.contrast = pm.central_height > 0.0 ? std::min(1.0, 2.0 * h / pm.central_height) : 0.0;

  // Spurious structure: local maxima on k > 0 away from the centre and main peak.
  const double excl = std::max(2.0 * pm.width, 3.0 * dk);
  double spur = 0.0;
  for (std::size_t i = mid + 1; i + 1 < m; ++i) {
    const double k = (static_cast<double>(i) - static_cast<double>(mid)) * dk;
    if (k < excl || std::abs(k - pm.separation) < excl) continue;
    if (a[i] > a[i - 1] && a[i] >= a[i + 1]) spur = std::max(spur, a[i]);
  }
  pm.spurious_ratio = spur / h;
  return pm;
}

// ---------------------------------------------------------------------------

/// Fringe amplitude scaled by the coherent fraction exp(-Gamma_eff tau).
inline PeakMetrics apply_decay(PeakMetrics pm, double gamma_eff, double tau) {
  if (!(gamma_eff >= 0.0) || !(tau >= 0.0)) fail(ErrorKind::domain, "decay rate and duration must be non-negative");
  const double s = std::exp(-gamma_eff * tau);
  pm.height *= s;
  pm.contrast *= s;
  return pm;
}

/// Decohered atoms are split evenly between the two states, so the
/// fringe term shrinks by the survival factor and the central peak stays.
inline InterferometerSignal apply_decay(InterferometerSignal sig, double gamma_eff, double tau) {
  if (!(gamma_eff >= 0.0) || !(tau >= 0.0)) fail(ErrorKind::domain, "decay rate and duration must be non-negative");
  const double s = std::exp(-gamma_eff * tau);
  for (std::size_t i = 0; i < sig.ground.size(); ++i) sig.ground[i] = s * sig.ground[i] + 0.5 * (1.0 - s) * sig.total[i];
  fourier_signal(sig);
  return sig;
}

}  // namespace lmtpsi
