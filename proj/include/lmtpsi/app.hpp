#pragma once

// Command implementations behind the lmtpsi executable.

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lmtpsi/config.hpp"
#include "lmtpsi/constants.hpp"
#include "lmtpsi/error.hpp"
#include "lmtpsi/interferometer.hpp"
#include "lmtpsi/io.hpp"
#include "lmtpsi/raman.hpp"
#include "lmtpsi/sensitivity.hpp"
#include "lmtpsi/signal.hpp"
#include "lmtpsi/version.hpp"

namespace lmtpsi::app {

namespace fs = std::filesystem;

enum ExitCode : int { ok = 0, other = 1, config = 2, regime = 3, resolution = 4, detection = 5 };

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::configuration: return config;
    case ErrorKind::regime: return regime;
    case ErrorKind::resolution: return resolution;
    case ErrorKind::detection: return detection;
    default: return other;
  }
}

struct Options {
  std::string subcommand;
  std::optional<std::string> config_path;
  std::optional<std::string> preset;
  std::optional<std::string> out_dir;
  std::optional<std::vector<std::string>> formats;
  bool strict = false;
  bool allow_large_order = false;
  // convert
  std::optional<std::string> rabi;
  std::optional<std::string> intensity;
  std::string transition = "cycling";
};

/// Orders above this are refused by `simulate` unless explicitly allowed.
inline constexpr int simulate_order_limit = 9;

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::configuration, "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline ScenarioConfig load_config(const Options& opt) {
  if (opt.config_path && opt.preset) fail(ErrorKind::configuration, "give either --config or --preset, not both");
  if (!opt.config_path && !opt.preset) fail(ErrorKind::configuration, "a --config file or --preset is required");
  const std::string text = opt.preset ? preset_text(*opt.preset) : read_file(*opt.config_path);
  ScenarioConfig cfg = parse_config(text, opt.subcommand);
  if (opt.out_dir) cfg.output.directory = *opt.out_dir;
  if (opt.formats) {
    for (const auto& f : *opt.formats) {
      if (f != "csv" && f != "json" && f != "svg") fail(ErrorKind::configuration, "unknown format '" + f + "'");
    }
    cfg.output.formats = *opt.formats;
  }
  return cfg;
}

inline double mhz(double angular) { return angular / (phys::two_pi * 1e6); }

inline json config_json(const ScenarioConfig& c) {
  json j;
  j["species"] = c.species;
  j["laser"]["rabi_rad_s"] = c.laser.rabi;
  if (c.laser.detuning) j["laser"]["detuning_rad_s"] = *c.laser.detuning;
  j["laser"]["optimal_detuning"] = c.laser.optimal_detuning;
  if (c.laser.two_photon_detuning) j["laser"]["two_photon_detuning_rad_s"] = *c.laser.two_photon_detuning;
  else j["laser"]["two_photon_detuning"] = "recoil-compensated";
  j["laser"]["light_shift"] = c.laser.light_shift;
  j["laser"]["direction"] = c.laser.direction;
  if (c.trap.frequency) j["trap"]["frequency_rad_s"] = *c.trap.frequency;
  if (c.trap.size) j["trap"]["size_m"] = *c.trap.size;
  j["trap"]["temperature_K"] = c.trap.temperature;
  j["trap"]["n_max"] = c.trap.n_max;
  j["trap"]["weights"] = to_string(c.trap.weights);
  j["sequence"]["order"] = c.sequence.orders;
  j["sequence"]["half_time_s"] = c.sequence.half_time;
  j["sequence"]["compensation"] = c.sequence.compensation;
  j["sequence"]["ladder_gap_s"] = c.sequence.ladder_gap;
  j["sequence"]["ideal_pulses"] = c.sequence.ideal_pulses;
  j["rotation_rad_s"] = c.rotation;
  j["grid"]["dimension"] = c.grid.dimension;
  j["grid"]["points"] = c.grid.points;
  if (c.grid.extent) j["grid"]["extent_per_m"] = *c.grid.extent;
  j["grid"]["quadrature_nodes"] = c.grid.quadrature_nodes;
  j["grid"]["beam_axis_thermal"] = c.grid.beam_axis_thermal;
  j["sensitivity"]["n_min"] = c.sensitivity.n_min;
  j["sensitivity"]["n_max"] = c.sensitivity.n_max;
  j["sensitivity"]["detuning_policy"] =
      c.sensitivity.policy == DetuningPolicy::fixed ? "fixed" : "per-n-optimal";
  j["output"]["directory"] = c.output.directory;
  j["output"]["formats"] = c.output.formats;
  return j;
}

inline json manifest_base(const std::string& subcommand, const ScenarioConfig& cfg, const Options& opt) {
  json m;
  m["program"] = "lmtpsi";
  m["version"] = version;
  m["subcommand"] = subcommand;
  if (opt.preset) m["preset"] = *opt.preset;
  m["strict"] = opt.strict;
  m["inputs"] = config_json(cfg);
  m["species"] = io::species_json(cfg.atom());
  m["libraries"] = {{"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
                    {"fmt", FMT_VERSION},
                    {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR,
                                                  NLOHMANN_JSON_VERSION_MINOR, NLOHMANN_JSON_VERSION_PATCH)}};
  return m;
}

class Writer {
 public:
  explicit Writer(const ScenarioConfig& cfg) : cfg_(cfg), dir_(cfg.output.directory) {}

  bool wants(const std::string& f) const { return cfg_.has_format(f); }
  void text(const std::string& name, const std::string& content) {
    io::write_text(dir_ / name, content);
    files_.push_back(name);
  }
  void json_file(const std::string& name, const json& j) { text(name, j.dump(2) + "\n"); }
  const std::vector<std::string>& files() const { return files_; }
  const fs::path& dir() const { return dir_; }

 private:
  const ScenarioConfig& cfg_;
  fs::path dir_;
  std::vector<std::string> files_;
};

// ---------------------------------------------------------------------------

inline int simulate(const ScenarioConfig& cfg, const Options& opt, std::ostream& out) {
  const auto sp = cfg.atom();
  for (int n : cfg.sequence.orders) {
    if (n > simulate_order_limit && !opt.allow_large_order) {
      fail(ErrorKind::configuration, fmt::format("N = {} exceeds the simulate limit of {}; the closed-form "
                                                 "'sensitivity' model covers large N (override with "
                                                 "--allow-large-order)",
                                                 n, simulate_order_limit));
    }
  }
  Writer w(cfg);
  json manifest = manifest_base("simulate", cfg, opt);
  const auto ens = cfg.ensemble(opt.strict);
  const auto grid = cfg.momentum_grid(ens);
  manifest["ensemble"] = {{"trap_frequency_rad_s", ens.omega},
                          {"trap_size_m", ens.trap_size},
                          {"temperature_K", ens.temperature},
                          {"n_max", ens.n_max},
                          {"weight_mode", to_string(ens.mode)},
                          {"tail_weight_ratio", ens.weights.back() / ens.weights.front()},
                          {"weights", ens.weights}};
  manifest["grid"] = {{"points", grid.points},
                      {"extent_per_m", grid.extent()},
                      {"spacing_per_m", grid.spacing},
                      {"position_spacing_m", grid.position_spacing()},
                      {"position_extent_m", grid.position_spacing() * grid.points}};
  manifest["runs"] = json::array();

  std::vector<std::vector<double>> metric_cols(16);
  const std::vector<std::string> metric_header = {
      "order",      "rabi_rad_s",      "detuning_rad_s", "rabi_eff_rad_s", "gamma_eff_rad_s", "tau_s",
      "survival",   "k_omega_per_m",   "height",         "width_per_m",    "separation_per_m", "central_height",
      "contrast",   "spurious_ratio",  "height_no_decay", "norm_drift"};

  RunOptions ro;
  ro.ideal_pulses = cfg.sequence.ideal_pulses;
  ro.beam_axis_thermal = cfg.grid.beam_axis_thermal;
  ro.quadrature_nodes = cfg.grid.quadrature_nodes;

  for (std::size_t ri = 0; ri < cfg.laser.rabi.size(); ++ri) {
    const double rabi = cfg.laser.rabi[ri];
    for (int n : cfg.sequence.orders) {
      const auto laser = cfg.laser_params(rabi, n);
      const auto seq =
          build_lmt_sequence(n, cfg.sequence.half_time, laser, sp, cfg.sequence.compensation, cfg.sequence.ladder_gap);
      const auto res = run_interferometer(ens, seq, cfg.rotation, laser, sp, grid, ro);
      auto sig = spatial_signal(res, sp.mass);
      const auto decay = effective_decay(laser, sp, seq.total_duration);
      const double gamma = ro.ideal_pulses ? 0.0 : decay.rate;
      const auto decayed = apply_decay(sig, gamma, seq.total_duration);
      const double k_omega = std::abs(fringe_wavenumber(n, cfg.rotation, cfg.sequence.half_time, sp));
      const std::string tag = fmt::format("N{}_rabi{}", n, ri);

      json run;
      run["tag"] = tag;
      run["order"] = n;
      run["rabi_rad_s"] = rabi;
      run["rabi_over_2pi_MHz"] = mhz(rabi);
      run["detuning_rad_s"] = laser.one_photon_detuning;
      run["detuning_over_2pi_MHz"] = mhz(laser.one_photon_detuning);
      run["two_photon_detuning_rad_s"] = laser.two_photon_detuning;
      run["rabi_eff_rad_s"] = seq.rabi_eff;
      run["gamma_eff_rad_s"] = gamma;
      run["gamma_eff_model_rad_s"] = decay.rate;
      run["tau_s"] = seq.total_duration;
      run["survival"] = std::exp(-gamma * seq.total_duration);
      json ladder = json::array();
      for (int k = 1; k <= (n - 1) / 2; ++k) {
        const auto b = beta_and_efficiency(k, seq.rabi_eff, sp);
        ladder.push_back({{"n", k}, {"beta", b.beta}, {"efficiency", b.efficiency}, {"area_rad", b.area}});
      }
      run["beta_ladder"] = ladder;
      run["rotation_rad_s"] = cfg.rotation;
      run["k_omega_per_m"] = k_omega;
      run["r_omega_m"] = rotation_displacement(n, cfg.rotation, cfg.sequence.half_time, sp);
      run["norm_drift"] = res.max_norm_drift;
      run["quadrature_nodes"] = res.node_weight.size();
      run["ideal_pulses"] = ro.ideal_pulses;

      std::optional<PeakMetrics> pm, pm_raw;
      if (k_omega > 0.0) {
        pm_raw = peak_metrics(sig, k_omega);
        pm = peak_metrics(decayed, k_omega);
        run["metrics"] = {{"height", pm->height},
                          {"height_no_decay", pm_raw->height},
                          {"width_per_m", pm->width},
                          {"separation_per_m", pm->separation},
                          {"central_height", pm->central_height},
                          {"contrast", pm->contrast},
                          {"spurious_ratio", pm->spurious_ratio}};
      } else {
        run["metrics"] = nullptr;
      }
      const double nan = std::nan("");
      const std::vector<double> row = {static_cast<double>(n), rabi, laser.one_photon_detuning, seq.rabi_eff, gamma,
                                       seq.total_duration, std::exp(-gamma * seq.total_duration), k_omega,
                                       pm ? pm->height : nan, pm ? pm->width : nan, pm ? pm->separation : nan,
                                       pm ? pm->central_height : std::abs(decayed.fourier[decayed.fourier.size() / 2]),
                                       pm ? pm->contrast : nan, pm ? pm->spurious_ratio : nan,
                                       pm_raw ? pm_raw->height : nan, res.max_norm_drift};
      for (std::size_t c = 0; c < row.size(); ++c) metric_cols[c].push_back(row[c]);

      if (w.wants("csv")) {
        w.text("signal_" + tag + ".csv", io::spatial_csv(decayed));
        w.text("fourier_" + tag + ".csv", io::fourier_csv(decayed));
      }
      if (w.wants("json")) w.json_file("sequence_" + tag + ".json", io::sequence_json(seq));
      if (w.wants("svg")) {
        std::vector<double> r_um;
        for (double r : decayed.r) r_um.push_back(r * 1e6);
        w.text("signal_" + tag + ".svg",
               io::svg_plot(fmt::format("<P_g(r)>, N = {}, Omega_0/2pi = {:.4g} MHz", n, mhz(rabi)), "r (um)",
                            "density (1/m)", {io::decimate({"ground", r_um, decayed.ground}, 4000)}));
        const double kmax = k_omega > 0.0 ? 2.5 * k_omega : 20.0 / (decayed.position_spacing * 200.0);
        io::Series f{"|P~_g|", {}, {}};
        for (std::size_t i = 0; i < decayed.k.size(); ++i) {
          if (std::abs(decayed.k[i]) <= kmax) {
            f.x.push_back(decayed.k[i]);
            f.y.push_back(std::abs(decayed.fourier[i]));
          }
        }
        w.text("fourier_" + tag + ".svg",
               io::svg_plot(fmt::format("Fourier signal, N = {}, Omega_0/2pi = {:.4g} MHz", n, mhz(rabi)),
                            "k (1/m)", "|P~_g(k)|", {io::decimate(f, 4000)}));
      }
      manifest["runs"].push_back(run);
      if (pm) {
        out << fmt::format("N={} Omega_0/2pi={:.6g} MHz: h={:.6f} sep={:.6g} 1/m (k_Omega={:.6g}) FWHM={:.6g} 1/m "
                           "contrast={:.4f} spurious={:.3g} survival={:.4f}\n",
                           n, mhz(rabi), pm->height, pm->separation, k_omega, pm->width, pm->contrast,
                           pm->spurious_ratio, std::exp(-gamma * seq.total_duration));
      } else {
        out << fmt::format("N={} Omega_0/2pi={:.6g} MHz: no rotation, fringe-free profile written\n", n, mhz(rabi));
      }
    }
  }
  if (w.wants("csv")) w.text("metrics.csv", io::csv(metric_header, metric_cols));
  manifest["files"] = w.files();
  w.json_file("manifest.json", manifest);
  return ok;
}

inline int sensitivity(const ScenarioConfig& cfg, const Options& opt, std::ostream& out) {
  const auto sp = cfg.atom();
  Writer w(cfg);
  json manifest = manifest_base("sensitivity", cfg, opt);
  std::vector<std::vector<double>> cols(5);
  std::vector<io::Series> series;
  json curves = json::array();
  for (double rabi : cfg.laser.rabi) {
    const auto c = scan_improvement(cfg.sensitivity.n_min, cfg.sensitivity.n_max, rabi, sp, cfg.sensitivity.policy,
                                    cfg.laser.detuning.value_or(0.0));
    io::Series s{fmt::format("Omega_0/2pi = {:.4g} MHz", mhz(rabi)), {}, {}};
    for (std::size_t i = 0; i < c.n.size(); ++i) {
      cols[0].push_back(rabi);
      cols[1].push_back(mhz(rabi));
      cols[2].push_back(c.n[i]);
      cols[3].push_back(c.detuning[i]);
      cols[4].push_back(c.epsilon[i]);
      s.x.push_back(c.n[i]);
      s.y.push_back(c.epsilon[i]);
    }
    series.push_back(s);
    const double dopt = optimal_detuning(c.n_opt, rabi, sp);
    curves.push_back({{"rabi_rad_s", rabi},
                      {"rabi_over_2pi_MHz", mhz(rabi)},
                      {"scan_epsilon_max", c.epsilon_max},
                      {"scan_n_opt", c.n_opt},
                      {"closed_form_epsilon_max", max_improvement(rabi, sp)},
                      {"closed_form_n_opt", optimal_order(rabi, sp)},
                      {"optimal_detuning_at_scan_n_opt_rad_s", dopt},
                      {"optimal_detuning_at_scan_n_opt_over_2pi_MHz", mhz(dopt)}});
    out << fmt::format("Omega_0/2pi={:.6g} MHz: scan max eps={:.4f} at N={} (closed form eps_max={:.4f}, "
                       "N_opt={:.3f})\n",
                       mhz(rabi), c.epsilon_max, c.n_opt, max_improvement(rabi, sp), optimal_order(rabi, sp));
  }
  if (w.wants("csv")) {
    w.text("sensitivity_curve.csv",
           io::csv({"rabi_rad_s", "rabi_over_2pi_MHz", "order", "detuning_rad_s", "epsilon"}, cols));
  }
  if (w.wants("json")) w.json_file("sensitivity.json", curves);
  if (w.wants("svg")) w.text("sensitivity.svg", io::svg_plot("Improvement factor", "N", "epsilon", series, true));
  manifest["results"] = curves;
  manifest["prefactors"] = {{"epsilon_max_at_2pi_1MHz", max_improvement_prefactor(sp)},
                            {"n_opt_at_2pi_1MHz", optimal_order_prefactor(sp)}};
  manifest["files"] = w.files();
  w.json_file("manifest.json", manifest);
  return ok;
}

inline int optimum(const ScenarioConfig& cfg, const Options& opt, std::ostream& out) {
  const auto sp = cfg.atom();
  Writer w(cfg);
  json manifest = manifest_base("optimum", cfg, opt);
  json results = json::array();
  std::vector<std::vector<double>> cols(7);
  for (double rabi : cfg.laser.rabi) {
    std::vector<std::optional<int>> orders;
    if (cfg.sequence.orders.size() == 1 && cfg.sequence.orders.front() == 1) orders.push_back(std::nullopt);
    for (int n : cfg.sequence.orders) {
      if (!(cfg.sequence.orders.size() == 1 && n == 1)) orders.push_back(n);
    }
    for (const auto& n : orders) {
      const auto p = optimal_params(rabi, sp, n);
      results.push_back({{"rabi_rad_s", rabi},
                         {"rabi_over_2pi_MHz", mhz(rabi)},
                         {"epsilon_max", p.epsilon_max},
                         {"n_opt", p.n_opt},
                         {"n_opt_odd", p.n_opt_odd},
                         {"order", p.n},
                         {"optimal_detuning_rad_s", p.detuning},
                         {"optimal_detuning_over_2pi_MHz", mhz(p.detuning)},
                         {"epsilon_at_order", p.epsilon}});
      const std::vector<double> row = {rabi, p.epsilon_max, p.n_opt, static_cast<double>(p.n_opt_odd),
                                       static_cast<double>(p.n), p.detuning, p.epsilon};
      for (std::size_t c = 0; c < row.size(); ++c) cols[c].push_back(row[c]);
      out << fmt::format("Omega_0/2pi={:.6g} MHz: eps_max={:.4f} N_opt={:.3f} (odd {}); N={}: "
                         "Delta_0_opt/2pi={:.6g} MHz eps={:.4f}\n",
                         mhz(rabi), p.epsilon_max, p.n_opt, p.n_opt_odd, p.n, mhz(p.detuning), p.epsilon);
    }
  }
  if (w.wants("json")) w.json_file("optimum.json", results);
  if (w.wants("csv")) {
    w.text("optimum.csv", io::csv({"rabi_rad_s", "epsilon_max", "n_opt", "n_opt_odd", "order",
                                   "optimal_detuning_rad_s", "epsilon_at_order"},
                                  cols));
  }
  manifest["results"] = results;
  manifest["files"] = w.files();
  w.json_file("manifest.json", manifest);
  return ok;
}

inline int convert(const Options& opt, std::ostream& out) {
  if (opt.rabi.has_value() == opt.intensity.has_value()) {
    fail(ErrorKind::configuration, "convert needs exactly one of --rabi or --intensity");
  }
  const auto sp = rb87();
  const auto tr = transition_from_string(opt.transition);
  json j;
  j["transition"] = to_string(tr);
  j["transition_strength"] = transition_strength(sp, tr);
  if (opt.rabi) {
    const double rabi = parse_quantity(*opt.rabi, Dimension::angular_frequency, sp.linewidth);
    const double i = rabi_to_intensity(rabi, tr, sp);
    j["rabi_rad_s"] = rabi;
    j["intensity_W_cm2"] = i;
    out << fmt::format("{:.6g} W/cm2  (Omega_0 = {:.6g} rad/s = 2pi x {:.6g} MHz = {:.6g} Gamma, {})\n", i, rabi,
                       mhz(rabi), rabi / sp.linewidth, to_string(tr));
  } else {
    const double i = parse_quantity(*opt.intensity, Dimension::intensity, sp.linewidth);
    const double rabi = intensity_to_rabi(i, tr, sp);
    j["intensity_W_cm2"] = i;
    j["rabi_rad_s"] = rabi;
    out << fmt::format("Omega_0 = {:.6g} rad/s = 2pi x {:.6g} MHz = {:.6g} Gamma  ({:.6g} W/cm2, {})\n", rabi,
                       mhz(rabi), rabi / sp.linewidth, i, to_string(tr));
  }
  if (opt.out_dir) {
    const fs::path dir(*opt.out_dir);
    io::write_text(dir / "convert.json", j.dump(2) + "\n");
    io::write_text(dir / "species.json", io::species_json(sp).dump(2) + "\n");
  }
  return ok;
}

/// Run a subcommand, mapping library errors to exit codes.
inline int run(const Options& opt, std::ostream& out, std::ostream& err) {
  try {
    if (opt.subcommand == "convert") return convert(opt, out);
    const auto cfg = load_config(opt);
    if (opt.subcommand == "simulate") return simulate(cfg, opt, out);
    if (opt.subcommand == "sensitivity") return sensitivity(cfg, opt, out);
    if (opt.subcommand == "optimum") return optimum(cfg, opt, out);
    fail(ErrorKind::configuration, "unknown subcommand '" + opt.subcommand + "'");
  } catch (const ConfigError& e) {
    err << "configuration error:\n";
    for (const auto& v : e.violations()) err << "  " << v << "\n";
    return config;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return other;
  }
}

}  // namespace lmtpsi::app
