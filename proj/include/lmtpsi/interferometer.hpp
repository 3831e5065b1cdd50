#pragma once

// LMT pulse sequences and their action on a trapped-and-released ensemble.
//
// State model: for every transverse momentum k (the rotation-sensitive
// axis) and every beam-axis momentum node p, the atom lives on a ladder of
// beam-axis momentum states j = jmin..jmax. Even j is |g>, odd j is |e>.
// A pulse with direction s couples |g,j> <-> |e,j+s>. Energies are taken in
// the symmetric frame where the two arms of the interferometer are
// degenerate:  E_j = hbar (p + (j - 1/2) k_eff)^2 / 2m +- (delta_0 - w_r/2)/2.
// Rotation about the axis normal to k and k_eff adds the Coriolis phase
// (hbar k Omega / m) j k_eff dF with F(t) = 2T t - t^2, giving the relative
// phase r_Omega k between the arms of a closed interferometer.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "lmtpsi/constants.hpp"
#include "lmtpsi/error.hpp"
#include "lmtpsi/quantum_core.hpp"
#include "lmtpsi/raman.hpp"
#include "lmtpsi/sensitivity.hpp"

namespace lmtpsi {

enum class PulseKind { beam_splitter, ladder, mirror };

inline const char* to_string(PulseKind k) {
  switch (k) {
    case PulseKind::beam_splitter: return "beam-splitter";
    case PulseKind::ladder: return "ladder";
    case PulseKind::mirror: return "mirror";
  }
  return "ladder";
}

struct Pulse {
  PulseKind kind = PulseKind::ladder;
  double area = 0.0;       // mu = Omega_eff t, rad
  int direction = +1;      // sign of k_1 - k_2
  double start = 0.0;      // s
  double duration = 0.0;   // s
  int ladder_index = 0;    // n for ladder pulses, 0 otherwise
  double anchor = 0.0;     // instant at which the pulse acts in the ideal limit, s

  double end() const { return start + duration; }
  double nominal_area() const { return kind == PulseKind::beam_splitter ? 0.5 * phys::pi : phys::pi; }
};

struct PulseSequence {
  std::vector<Pulse> pulses;
  int order = 1;                // N, k_t = N k_eff
  double half_time = 0.0;       // T, s
  double total_duration = 0.0;  // tau, sum of pulse durations, s
  double rabi_eff = 0.0;        // Omega_eff used for the durations, rad/s
  bool compensated = true;
  double ladder_gap = 0.0;      // dead time between consecutive ladder pulses, s

  int ladder_count() const { return 4 * ((order - 1) / 2); }
  std::vector<double> durations() const {
    std::vector<double> d;
    for (const auto& p : pulses) d.push_back(p.duration);
    return d;
  }
};

/// Ladder pulse areas pi/sqrt(1+beta_n), n = 1..(N-1)/2 (all pi when uncompensated).
inline std::vector<double> ladder_areas(int order, double rabi_eff, const AtomSpecies& species, bool compensation) {
  std::vector<double> a;
  for (int n = 1; n <= (order - 1) / 2; ++n) {
    a.push_back(compensation ? beta_and_efficiency(n, rabi_eff, species).area : phys::pi);
  }
  return a;
}

/// pi/2 - ladder up - drift - ladder down - pi - ladder up - drift - ladder down - pi/2.
/// Ladder pulses run back to back (separated by `ladder_gap`) directly after
/// each beam splitter and directly before the central mirror and final
/// beam splitter.
inline PulseSequence build_lmt_sequence(int order, double half_time, const LaserParams& laser,
                                        const AtomSpecies& species, bool compensation = true,
                                        double ladder_gap = 0.0) {
  if (order < 1 || order % 2 == 0) fail(ErrorKind::domain, "N must be odd and >= 1");
  if (!(half_time > 0.0) || !std::isfinite(half_time)) fail(ErrorKind::domain, "T must be positive");
  if (!(ladder_gap >= 0.0)) fail(ErrorKind::domain, "ladder gap must be non-negative");
  const double dt0 = detuning_tilde(0.0, laser, species);
  check_regime(dt0, laser);
  const double rabi = laser.rabi_ground * laser.rabi_excited / (2.0 * dt0);
  if (!(rabi > 0.0)) fail(ErrorKind::domain, "Omega_eff must be positive (Delta~_0 > 0)");

  PulseSequence seq;
  seq.order = order;
  seq.half_time = half_time;
  seq.rabi_eff = rabi;
  seq.compensated = compensation;
  seq.ladder_gap = ladder_gap;

  const int s = laser.direction >= 0 ? +1 : -1;
  const int m = (order - 1) / 2;
  const auto areas = ladder_areas(order, rabi, species, compensation);
  const double t_bs = 0.5 * phys::pi / rabi;
  const double t_pi = phys::pi / rabi;
  double ramp_len = 0.0;
  for (double a : areas) ramp_len += a / rabi;
  if (m > 0) ramp_len += (m - 1) * ladder_gap;

  auto ladder_pulse = [&](int n, double start, double anchor) {
    Pulse p;
    p.kind = PulseKind::ladder;
    p.ladder_index = n;
    p.area = areas[n - 1];
    p.direction = (n % 2 == 1) ? -s : s;
    p.start = start;
    p.duration = p.area / rabi;
    p.anchor = anchor;
    return p;
  };
  auto core_pulse = [&](PulseKind kind, double start, double anchor) {
    Pulse p;
    p.kind = kind;
    p.area = kind == PulseKind::beam_splitter ? 0.5 * phys::pi : phys::pi;
    p.direction = s;
    p.start = start;
    p.duration = p.area / rabi;
    p.anchor = anchor;
    return p;
  };
  auto ramp_up = [&](double t0, double anchor) {
    double t = t0;
    for (int n = 1; n <= m; ++n) {
      seq.pulses.push_back(ladder_pulse(n, t, anchor));
      t += seq.pulses.back().duration + ladder_gap;
    }
  };
  auto ramp_down = [&](double t_end, double anchor) {
    double t = t_end - ramp_len;
    for (int n = m; n >= 1; --n) {
      seq.pulses.push_back(ladder_pulse(n, t, anchor));
      t += seq.pulses.back().duration + ladder_gap;
    }
  };

  const double t = half_time;
  seq.pulses.push_back(core_pulse(PulseKind::beam_splitter, 0.0, 0.0));
  ramp_up(t_bs, 0.0);
  ramp_down(t - 0.5 * t_pi, t);
  seq.pulses.push_back(core_pulse(PulseKind::mirror, t - 0.5 * t_pi, t));
  ramp_up(t + 0.5 * t_pi, t);
  ramp_down(2.0 * t - t_bs, 2.0 * t);
  seq.pulses.push_back(core_pulse(PulseKind::beam_splitter, 2.0 * t - t_bs, 2.0 * t));

  for (const auto& p : seq.pulses) seq.total_duration += p.duration;
  if (seq.total_duration >= 0.1 * half_time) {
    fail(ErrorKind::timing, "total pulse duration " + std::to_string(seq.total_duration) +
                                " s is not small compared to T (must be < T/10)");
  }
  for (std::size_t i = 1; i < seq.pulses.size(); ++i) {
    if (seq.pulses[i].start < seq.pulses[i - 1].end() - 1e-15 * half_time) {
      fail(ErrorKind::timing, "ladder ramps overlap; reduce the ladder gap or increase T");
    }
  }
  return seq;
}

// ---------------------------------------------------------------------------
// Conventional (ray-picture) signal and the rotation scales

/// k_Omega = N k_eff Omega T.
inline double fringe_wavenumber(int order, double rotation, double half_time, const AtomSpecies& species) {
  return order * species.effective_wavenumber() * rotation * half_time;
}

/// r_Omega = 2 hbar N k_eff Omega T^2 / m; the arm phase difference is r_Omega k.
inline double rotation_displacement(int order, double rotation, double half_time, const AtomSpecies& species) {
  return 2.0 * phys::hbar * order * species.effective_wavenumber() * rotation * half_time * half_time /
         species.mass;
}

/// (1 + cos k_Omega r) / 2.
inline double conventional_signal(double r, double k_omega) { return 0.5 * (1.0 + std::cos(k_omega * r)); }

// ---------------------------------------------------------------------------

struct RunOptions {
  bool ideal_pulses = false;      // zero-duration, resonant pulses of nominal area
  bool beam_axis_thermal = true;  // average over the beam-axis momentum spread
  int quadrature_nodes = 8;
  int ladder_padding = 2;
};

struct InterferometerResult {
  MomentumGrid grid;
  int j_min = 0;
  int j_max = 0;
  std::vector<double> node_momentum;  // beam-axis p, 1/m
  std::vector<double> node_weight;
  // transfer[q * J + (j - j_min)][i]: amplitude in ladder state j for a unit
  // input |g, j=0> at transverse grid point i and beam-axis node q.
  std::vector<cvec> transfer;
  std::vector<MomentumWavefunction> eigenstates;
  std::vector<double> weights;
  double expansion_time = 0.0;
  double max_norm_drift = 0.0;

  int ladder_size() const { return j_max - j_min + 1; }
  const cvec& channel(std::size_t q, int j) const {
    return transfer[q * static_cast<std::size_t>(ladder_size()) + static_cast<std::size_t>(j - j_min)];
  }

  /// Final amplitudes psi_n(k) c_{q,j}(k) for one eigenstate, one channel
  /// per (node, ladder state), with the node weight. Ground channels only
  /// when `ground_only`.
  struct Channel {
    double weight = 0.0;
    int j = 0;
    MomentumWavefunction state;
  };
  std::vector<Channel> channels(std::size_t n, bool ground_only = true) const {
    std::vector<Channel> out;
    for (std::size_t q = 0; q < node_weight.size(); ++q) {
      for (int j = j_min; j <= j_max; ++j) {
        if (ground_only && (j % 2 != 0)) continue;
        Channel c;
        c.weight = node_weight[q];
        c.j = j;
        c.state.grid = grid;
        const auto& t = channel(q, j);
        c.state.amplitude.resize(grid.points);
        for (std::size_t i = 0; i < grid.points; ++i) c.state.amplitude[i] = eigenstates[n].amplitude[i] * t[i];
        out.push_back(std::move(c));
      }
    }
    return out;
  }

  /// Ground-state fraction of eigenstate n, summed over channels.
  double ground_fraction(std::size_t n) const {
    double s = 0.0;
    for (const auto& c : channels(n, true)) s += c.weight * c.state.norm();
    return s;
  }
};

namespace detail {

inline bool is_ground(int j) { return (j % 2 + 2) % 2 == 0; }

/// Beam-axis momentum nodes and weights for the ensemble's marginal density.
inline void beam_axis_nodes(const ThermalEnsemble& ens, int count, std::vector<double>& p, std::vector<double>& w) {
  p.clear();
  w.clear();
  if (count <= 1) {
    p.push_back(0.0);
    w.push_back(1.0);
    return;
  }
  double mean_n = 0.0;
  for (std::size_t n = 0; n < ens.weights.size(); ++n) mean_n += ens.weights[n] * (n + 0.5);
  const double sigma = std::sqrt(mean_n) / ens.trap_size;
  const double lo = -4.0 * sigma;
  const double step = 8.0 * sigma / (count - 1);
  double sum = 0.0;
  for (int q = 0; q < count; ++q) {
    const double k = lo + q * step;
    const auto h = hermite_functions(ens.n_max, k * ens.trap_size);
    double rho = 0.0;
    for (int n = 0; n <= ens.n_max; ++n) rho += ens.weights[n] * h[n] * h[n];
    p.push_back(k);
    w.push_back(rho);
    sum += rho;
  }
  for (auto& x : w) x /= sum;
}

}  // namespace detail

/// Evolve the ensemble through the sequence under rotation `rotation`
/// (rad/s). Transverse kinetic phases are left to the signal stage.
inline InterferometerResult run_interferometer(const ThermalEnsemble& ensemble, const PulseSequence& sequence,
                                               double rotation, const LaserParams& laser,
                                               const AtomSpecies& species, const MomentumGrid& grid,
                                               const RunOptions& options = {}) {
  using C = std::complex<double>;
  const int order = sequence.order;
  if (order < 1 || order % 2 == 0) fail(ErrorKind::domain, "N must be odd and >= 1");
  if (sequence.pulses.empty()) fail(ErrorKind::domain, "empty pulse sequence");
  if (!options.ideal_pulses) {
    check_regime(detuning_tilde(order * species.effective_wavenumber(), laser, species), laser);
  }

  InterferometerResult res;
  res.grid = grid;
  res.eigenstates = ho_momentum_eigenstates(ensemble.n_max, ensemble.trap_size, grid);
  res.weights = ensemble.weights;
  res.expansion_time = 2.0 * sequence.half_time;
  const int m = (order - 1) / 2;
  res.j_min = -m - options.ladder_padding;
  res.j_max = m + 1 + options.ladder_padding;
  const int nj = res.ladder_size();

  const bool thermal = options.beam_axis_thermal && !options.ideal_pulses;
  detail::beam_axis_nodes(ensemble, thermal ? options.quadrature_nodes : 1, res.node_momentum, res.node_weight);
  const std::size_t nq = res.node_momentum.size();
  res.transfer.assign(nq * static_cast<std::size_t>(nj), cvec(grid.points, C(0.0)));

  const double keff = species.effective_wavenumber();
  const double c_kin = phys::hbar / (2.0 * species.mass);
  const double internal = 0.5 * (laser.two_photon_detuning - 0.5 * species.recoil_rate());
  const double t_final = 2.0 * sequence.half_time;
  auto big_f = [&](double t) { return t_final * t - t * t; };
  // Coriolis phase per unit transverse k per unit ladder index per unit dF.
  const double rot_rate = phys::hbar * rotation * keff / species.mass;

  std::vector<const Pulse*> order_list;
  for (const auto& p : sequence.pulses) order_list.push_back(&p);
  std::stable_sort(order_list.begin(), order_list.end(), [&](const Pulse* a, const Pulse* b) {
    return options.ideal_pulses ? a->anchor < b->anchor : a->start < b->start;
  });

  double worst_drift = 0.0;
  for (std::size_t q = 0; q < nq; ++q) {
    const double p = res.node_momentum[q];
    std::vector<double> energy(nj);
    for (int jj = 0; jj < nj; ++jj) {
      const int j = res.j_min + jj;
      const double kb = p + (j - 0.5) * keff;
      energy[jj] = c_kin * kb * kb + (detail::is_ground(j) ? internal : -internal);
    }

    // Per pulse: pair matrices (ground index, excited index, 2x2 U) and the
    // phases of uncoupled states; everything here is independent of k.
    struct PairOp {
      int g = 0, e = 0;
      Eigen::Matrix2cd u;
    };
    struct PulseOp {
      double t0 = 0.0, t1 = 0.0;  // interval occupied by the pulse
      std::vector<PairOp> pairs;
      std::vector<std::pair<int, C>> singles;
    };
    std::vector<PulseOp> ops;
    for (const Pulse* pp : order_list) {
      PulseOp op;
      const int s = pp->direction >= 0 ? +1 : -1;
      std::vector<bool> used(nj, false);
      if (options.ideal_pulses) {
        op.t0 = op.t1 = pp->anchor;
        const Eigen::Matrix2cd u = pulse_propagator(1.0, 0.0, pp->nominal_area());
        for (int jj = 0; jj < nj; ++jj) {
          const int j = res.j_min + jj;
          if (!detail::is_ground(j)) continue;
          const int je = jj + s;
          if (je < 0 || je >= nj) continue;
          op.pairs.push_back({jj, je, u});
          used[jj] = used[je] = true;
        }
        for (int jj = 0; jj < nj; ++jj) {
          if (!used[jj]) op.singles.push_back({jj, C(1.0)});
        }
      } else {
        op.t0 = pp->start;
        op.t1 = pp->end();
        const double tau = pp->duration;
        LaserParams pulse_laser = laser;
        pulse_laser.direction = s;
        for (int jj = 0; jj < nj; ++jj) {
          const int j = res.j_min + jj;
          if (!detail::is_ground(j)) continue;
          const int je = jj + s;
          if (je < 0 || je >= nj) continue;
          const double kg = p + (j - 0.5) * keff;
          const double dt = detuning_tilde(kg, pulse_laser, species);
          const double rabi = laser.rabi_ground * laser.rabi_excited / (2.0 * dt);
          double eg = energy[jj], ee = energy[je];
          if (laser.include_light_shift) {
            eg += laser.rabi_ground * laser.rabi_ground / (4.0 * dt);
            ee += laser.rabi_excited * laser.rabi_excited / (4.0 * dt);
          }
          const double mean = 0.5 * (eg + ee);
          const Eigen::Matrix2cd u =
              std::polar(1.0, -mean * tau) * pulse_propagator(rabi, eg - ee, tau);
          op.pairs.push_back({jj, je, u});
          used[jj] = used[je] = true;
        }
        for (int jj = 0; jj < nj; ++jj) {
          if (!used[jj]) op.singles.push_back({jj, std::polar(1.0, -energy[jj] * tau)});
        }
      }
      ops.push_back(std::move(op));
    }

    // Free-evolution phases before each pulse (and after the last one).
    std::vector<std::vector<C>> free_phase(ops.size() + 1, std::vector<C>(nj));
    std::vector<double> free_df(ops.size() + 1);
    std::vector<double> half1_df(ops.size()), half2_df(ops.size());
    double t_cur = 0.0;
    for (std::size_t k = 0; k <= ops.size(); ++k) {
      const double t_to = k < ops.size() ? ops[k].t0 : t_final;
      const double dt = t_to - t_cur;
      if (dt < -1e-15 * t_final) fail(ErrorKind::timing, "pulse sequence is not time ordered");
      for (int jj = 0; jj < nj; ++jj) free_phase[k][jj] = std::polar(1.0, -energy[jj] * std::max(dt, 0.0));
      free_df[k] = big_f(t_to) - big_f(t_cur);
      if (k < ops.size()) {
        const double tm = 0.5 * (ops[k].t0 + ops[k].t1);
        half1_df[k] = big_f(tm) - big_f(ops[k].t0);
        half2_df[k] = big_f(ops[k].t1) - big_f(tm);
        t_cur = ops[k].t1;
      }
    }

    const std::size_t base = q * static_cast<std::size_t>(nj);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < grid.points; ++i) {
      const double ky = grid.k(i);
      std::vector<C> c(nj, C(0.0));
      c[static_cast<std::size_t>(-res.j_min)] = 1.0;
      auto rotate = [&](double df) {
        if (df == 0.0 || rot_rate == 0.0) return;
        const double w = ky * rot_rate * df;
        for (int jj = 0; jj < nj; ++jj) c[jj] *= std::polar(1.0, -w * (res.j_min + jj));
      };
      for (std::size_t k = 0; k < ops.size(); ++k) {
        for (int jj = 0; jj < nj; ++jj) c[jj] *= free_phase[k][jj];
        rotate(free_df[k]);
        rotate(half1_df[k]);
        for (const auto& pr : ops[k].pairs) {
          const C g = c[pr.g], e = c[pr.e];
          c[pr.g] = pr.u(0, 0) * g + pr.u(0, 1) * e;
          c[pr.e] = pr.u(1, 0) * g + pr.u(1, 1) * e;
        }
        for (const auto& sg : ops[k].singles) c[sg.first] *= sg.second;
        rotate(half2_df[k]);
      }
      for (int jj = 0; jj < nj; ++jj) c[jj] *= free_phase[ops.size()][jj];
      rotate(free_df[ops.size()]);
      for (int jj = 0; jj < nj; ++jj) res.transfer[base + jj][i] = c[jj];
    }

    for (std::size_t i = 0; i < grid.points; ++i) {
      double nrm = 0.0;
      for (int jj = 0; jj < nj; ++jj) nrm += std::norm(res.transfer[base + jj][i]);
      if (!std::isfinite(nrm)) fail(ErrorKind::numerical_integrity, "non-finite amplitudes after evolution");
      worst_drift = std::max(worst_drift, std::abs(nrm - 1.0));
    }
  }
  res.max_norm_drift = worst_drift;
  const double tol = options.ideal_pulses ? 1e-8 : 1e-6;
  if (worst_drift > tol) {
    fail(ErrorKind::numerical_integrity, "norm drift " + std::to_string(worst_drift) + " exceeds " +
                                             std::to_string(tol));
  }
  return res;
}

}  // namespace lmtpsi
