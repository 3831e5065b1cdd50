#pragma once

// Closed-form LMT sensitivity model: pi-pulse efficiencies, peak height,
// improvement factor and its optimum over detuning and LMT order.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lmtpsi/constants.hpp"
#include "lmtpsi/error.hpp"

namespace lmtpsi {

inline void require_odd_order(int n) {
  if (n < 1 || n % 2 == 0) fail(ErrorKind::domain, "N must be odd and >= 1 (got " + std::to_string(n) + ")");
}

struct BetaEfficiency {
  double beta = 0.0;        // (delta_k / Omega_eff)^2
  double efficiency = 1.0;  // eta = 1/(1+beta) at the compensated area
  double area = 0.0;        // mu = pi / sqrt(1+beta)
};

/// Doppler penalty for an atom at k = k_multiple * k_eff.
inline BetaEfficiency beta_and_efficiency(double k_multiple, double rabi_eff, const AtomSpecies& species) {
  if (!(rabi_eff > 0.0) || !std::isfinite(rabi_eff)) fail(ErrorKind::domain, "Omega_eff must be positive");
  const double x = k_multiple * species.recoil_rate() / rabi_eff;
  BetaEfficiency b;
  b.beta = x * x;
  b.efficiency = 1.0 / (1.0 + b.beta);
  b.area = phys::pi / std::sqrt(1.0 + b.beta);
  return b;
}

enum class HeightMode { exact, leading_order };

struct PeakHeight {
  double h = 0.0;
  double log_h = 0.0;
};

/// Fourier-domain side-peak height for k_t = N k_eff with compensated ladder
/// pulses. Normalised so the ideal conventional interferometer gives 1/4.
inline PeakHeight peak_height_model(int n, double rabi_eff, double gamma_eff, HeightMode mode,
                                    const AtomSpecies& species) {
  require_odd_order(n);
  if (!(rabi_eff > 0.0)) fail(ErrorKind::domain, "Omega_eff must be positive");
  if (!(gamma_eff >= 0.0)) fail(ErrorKind::domain, "Gamma_eff must be non-negative");
  const int ramp = (n - 1) / 2;
  const double ln4 = 2.0 * std::log(2.0);
  const double g = phys::pi * gamma_eff / rabi_eff;
  PeakHeight out;
  if (mode == HeightMode::exact) {
    double s = 0.0;
    for (int k = 1; k <= ramp; ++k) {
      const double beta = beta_and_efficiency(k, rabi_eff, species).beta;
      s += std::log1p(beta) + g / std::sqrt(1.0 + beta);
    }
    out.log_h = -4.0 * s - ln4;
  } else {
    const double beta_max = beta_and_efficiency(ramp, rabi_eff, species).beta;
    if (beta_max > 0.5) {
      fail(ErrorKind::approximation_validity, "largest ladder beta = " + std::to_string(beta_max) +
                                                  " exceeds 0.5; use the exact height model");
    }
    const double x = species.recoil_rate() / rabi_eff;
    const double nd = n;
    out.log_h = -(nd * nd * nd / 6.0) * (1.0 - 0.5 * g) * x * x - 2.0 * nd * g - ln4;
  }
  out.h = std::exp(out.log_h);
  return out;
}

// ---------------------------------------------------------------------------
// Improvement factor. Here Omega_eff = Omega_0^2 / 2 Delta_0 and
// Gamma_eff = Gamma Omega_eff / 2 Delta_0 (recoil shift of Delta~_0 dropped).

inline void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorKind::domain, std::string(what) + " must be positive");
}

/// ln eps = ln N - (N^3/3)(w_r Delta_0 / Omega_0^2)^2 - pi N Gamma / 2 Delta_0, N continuous.
inline double log_improvement_factor(double n, double rabi, double detuning, const AtomSpecies& species) {
  require_positive(n, "N");
  require_positive(rabi, "Omega_0");
  require_positive(detuning, "Delta_0");
  const double x = species.recoil_rate() * detuning / (rabi * rabi);
  return std::log(n) - (n * n * n / 3.0) * x * x - phys::pi * n * species.linewidth / (2.0 * detuning);
}

inline double improvement_factor(int n, double rabi, double detuning, const AtomSpecies& species) {
  require_odd_order(n);
  return std::exp(log_improvement_factor(n, rabi, detuning, species));
}

/// Delta_0 maximising ln eps at fixed N: (3 pi Gamma / 4)^{1/3} (Omega_0^2 / N w_r)^{2/3}.
inline double optimal_detuning(double n, double rabi, const AtomSpecies& species) {
  require_positive(n, "N");
  require_positive(rabi, "Omega_0");
  return std::cbrt(0.75 * phys::pi * species.linewidth) *
         std::pow(rabi * rabi / (n * species.recoil_rate()), 2.0 / 3.0);
}

/// ln eps at the optimal detuning: ln N - N^{5/3} (3 pi Gamma w_r / 4 Omega_0^2)^{2/3}.
inline double log_improvement_at_optimum(double n, double rabi, const AtomSpecies& species) {
  require_positive(n, "N");
  require_positive(rabi, "Omega_0");
  const double c = 0.75 * phys::pi * species.linewidth * species.recoil_rate() / (rabi * rabi);
  return std::log(n) - std::pow(n, 5.0 / 3.0) * std::pow(c, 2.0 / 3.0);
}

/// (3/125)^{1/5} (4 Omega_0^2 / pi Gamma w_r)^{2/5}, the continuous optimum of N.
inline double optimal_order(double rabi, const AtomSpecies& species) {
  require_positive(rabi, "Omega_0");
  const double y = 4.0 * rabi * rabi / (phys::pi * species.linewidth * species.recoil_rate());
  return std::pow(3.0 / 125.0, 0.2) * std::pow(y, 0.4);
}

/// e^{-3/5} N_opt.
inline double max_improvement(double rabi, const AtomSpecies& species) {
  return std::exp(-0.6) * optimal_order(rabi, species);
}

/// Prefactors of eps_max and N_opt in units of [Omega_0 / 2pi x 1 MHz]^{4/5}.
inline double max_improvement_prefactor(const AtomSpecies& species) {
  return max_improvement(phys::two_pi * 1e6, species);
}
inline double optimal_order_prefactor(const AtomSpecies& species) {
  return optimal_order(phys::two_pi * 1e6, species);
}

inline int nearest_odd(double x) {
  if (!(x >= 1.0)) return 1;
  const int f = static_cast<int>(std::floor(x));
  const int lo = f % 2 == 1 ? f : f - 1;
  return (x - lo) <= (lo + 2 - x) ? lo : lo + 2;
}

struct OptimalParams {
  double rabi = 0.0;
  double epsilon_max = 0.0;       // continuous-N maximum
  double n_opt = 0.0;             // continuous optimum
  int n_opt_odd = 1;              // nearest odd integer
  int n = 1;                      // order the detuning refers to
  double detuning = 0.0;          // Delta_0_opt(n)
  double epsilon = 0.0;           // eps(n) at Delta_0_opt(n)
};

/// Optimum summary; without an explicit N the nearest odd N_opt is used.
inline OptimalParams optimal_params(double rabi, const AtomSpecies& species, std::optional<int> n = std::nullopt) {
  OptimalParams p;
  p.rabi = rabi;
  p.n_opt = optimal_order(rabi, species);
  p.epsilon_max = max_improvement(rabi, species);
  p.n_opt_odd = nearest_odd(p.n_opt);
  p.n = n ? *n : p.n_opt_odd;
  require_odd_order(p.n);
  p.detuning = optimal_detuning(p.n, rabi, species);
  p.epsilon = improvement_factor(p.n, rabi, p.detuning, species);
  return p;
}

enum class DetuningPolicy { fixed, per_n_optimal };

struct SensitivityCurve {
  double rabi = 0.0;
  DetuningPolicy policy = DetuningPolicy::per_n_optimal;
  std::vector<int> n;
  std::vector<double> epsilon;
  std::vector<double> detuning;
  double epsilon_max = 0.0;
  int n_opt = 1;
};

/// eps(N) over odd N in [n_first, n_last].
inline SensitivityCurve scan_improvement(int n_first, int n_last, double rabi, const AtomSpecies& species,
                                         DetuningPolicy policy = DetuningPolicy::per_n_optimal,
                                         double fixed_detuning = 0.0) {
  if (n_first % 2 == 0) ++n_first;
  if (n_first < 1) n_first = 1;
  if (n_last < n_first) fail(ErrorKind::domain, "empty N range");
  if (policy == DetuningPolicy::fixed) require_positive(fixed_detuning, "Delta_0");
  SensitivityCurve c;
  c.rabi = rabi;
  c.policy = policy;
  for (int n = n_first; n <= n_last; n += 2) {
    const double d = policy == DetuningPolicy::fixed ? fixed_detuning : optimal_detuning(n, rabi, species);
    const double e = improvement_factor(n, rabi, d, species);
    c.n.push_back(n);
    c.epsilon.push_back(e);
    c.detuning.push_back(d);
    if (e > c.epsilon_max) {
      c.epsilon_max = e;
      c.n_opt = n;
    }
  }
  return c;
}

}  // namespace lmtpsi
