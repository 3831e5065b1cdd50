#pragma once

// Small point-source scenario shared by the simulator tests.

#include "lmtpsi/interferometer.hpp"
#include "lmtpsi/signal.hpp"

namespace lmtpsi::testing {

struct Scenario {
  AtomSpecies sp = rb87();
  double a = 0.1e-6;
  double temperature = 6e-6;
  int n_max = 0;
  std::size_t points = 4096;
  double half_time = 1.2e-3;
  double k_omega = 1.2e6;  // N = 1 fringe wavenumber, 1/m
  double rabi = phys::two_pi * 100e6;
  double detuning = phys::two_pi * 500e6;
  bool ideal = true;
  int order = 1;
  bool beam_axis_thermal = true;

  double rotation() const { return k_omega / (sp.effective_wavenumber() * half_time); }
  ThermalEnsemble ensemble() const { return ThermalEnsemble::from_trap_size(a, temperature, n_max, sp); }
  MomentumGrid grid() const { return MomentumGrid::make(points, 16.0 / a); }
  LaserParams laser() const { return LaserParams::symmetric(rabi, detuning, sp); }
  PulseSequence sequence() const { return build_lmt_sequence(order, half_time, laser(), sp); }

  InterferometerResult run(double rot) const {
    RunOptions o;
    o.ideal_pulses = ideal;
    o.beam_axis_thermal = beam_axis_thermal;
    return run_interferometer(ensemble(), sequence(), rot, laser(), sp, grid(), o);
  }
  InterferometerResult run() const { return run(rotation()); }
  InterferometerSignal signal(double rot) const { return spatial_signal(run(rot), sp.mass); }
  InterferometerSignal signal() const { return signal(rotation()); }
  PeakMetrics metrics() const { return peak_metrics(signal(), order * k_omega); }
};

}  // namespace lmtpsi::testing
