#pragma once

// Deterministic CSV, JSON and SVG writers.

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "lmtpsi/constants.hpp"
#include "lmtpsi/error.hpp"
#include "lmtpsi/interferometer.hpp"
#include "lmtpsi/quantum_core.hpp"
#include "lmtpsi/signal.hpp"

namespace lmtpsi::io {

using json = nlohmann::json;

inline std::string num(double v) { return fmt::format("{:.12g}", v); }

inline void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::configuration, "cannot open '" + path.string() + "' for writing");
  f << content;
  if (!f) fail(ErrorKind::configuration, "failed writing '" + path.string() + "'");
}

inline std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& columns) {
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c) out += (c ? "," : "") + header[c];
  out += '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ',';
      out += num(columns[c][r]);
    }
    out += '\n';
  }
  return out;
}

inline std::string wavefunction_csv(const MomentumWavefunction& wf) {
  std::vector<double> re, im;
  for (const auto& c : wf.amplitude) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  return csv({"k_per_m", "re", "im"}, {wf.grid.axis(), re, im});
}

inline std::string spatial_csv(const InterferometerSignal& s) {
  return csv({"r_m", "ground", "total"}, {s.r, s.ground, s.total});
}

inline std::string fourier_csv(const InterferometerSignal& s) {
  std::vector<double> re, im, ab;
  for (const auto& c : s.fourier) {
    re.push_back(c.real());
    im.push_back(c.imag());
    ab.push_back(std::abs(c));
  }
  return csv({"k_per_m", "abs", "re", "im"}, {s.k, ab, re, im});
}

inline json sequence_json(const PulseSequence& seq) {
  json j;
  j["order"] = seq.order;
  j["half_time_s"] = seq.half_time;
  j["total_duration_s"] = seq.total_duration;
  j["rabi_eff_rad_s"] = seq.rabi_eff;
  j["compensated"] = seq.compensated;
  j["ladder_gap_s"] = seq.ladder_gap;
  j["pulses"] = json::array();
  for (const auto& p : seq.pulses) {
    j["pulses"].push_back({{"kind", to_string(p.kind)},
                           {"ladder_index", p.ladder_index},
                           {"direction", p.direction},
                           {"area_rad", p.area},
                           {"start_s", p.start},
                           {"duration_s", p.duration}});
  }
  return j;
}

inline json species_json(const AtomSpecies& s) {
  json j;
  j["name"] = s.name;
  j["mass_kg"] = s.mass;
  j["linewidth_rad_s"] = s.linewidth;
  j["wavelength_m"] = s.wavelength;
  j["wavenumber_per_m"] = s.wavenumber();
  j["effective_wavenumber_per_m"] = s.effective_wavenumber();
  j["recoil_rate_rad_s"] = s.recoil_rate();
  j["decay_to_ground_rad_s"] = s.decay_to_ground;
  j["decay_to_excited_rad_s"] = s.decay_to_excited;
  j["cycling_reference_intensity_W_cm2"] = s.cycling_reference_intensity;
  if (s.matrix_elements) {
    const auto& m = *s.matrix_elements;
    j["matrix_elements"] = {{"cycling", m.cycling},
                            {"upper_ground_leg", m.upper_ground_leg},
                            {"upper_excited_leg", m.upper_excited_leg},
                            {"lower_ground_leg", m.lower_ground_leg},
                            {"lower_excited_leg", m.lower_excited_leg}};
    j["raman_path_ratio"] = raman_path_ratio(s);
  }
  return j;
}

// ---------------------------------------------------------------------------
// SVG line plots

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

namespace detail {
inline std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}
}  // namespace detail

inline std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                            const std::vector<Series>& series, bool markers = false) {
  const double w = 720, h = 440, ml = 80, mr = 20, mt = 40, mb = 60;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!(x1 > x0)) { x0 -= 1; x1 += 1; }
  if (!(y1 > y0)) { y0 -= 1; y1 += 1; }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (w - ml - mr); };
  auto py = [&](double y) { return h - mb - (y - y0) / (y1 - y0) * (h - mt - mb); };
  static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

  std::string o = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n",
      w, h, w, h);
  o += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", w, h);
  o += fmt::format("<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n", w / 2,
                   detail::escape(title));
  o += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", ml, mt,
                   w - ml - mr, h - mt - mb);
  for (int t = 0; t <= 4; ++t) {
    const double xv = x0 + t * (x1 - x0) / 4, yv = y0 + t * (y1 - y0) / 4;
    o += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:.4g}</text>\n", px(xv), h - mb + 18, xv);
    o += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.4g}</text>\n", ml - 6, py(yv) + 4, yv);
  }
  o += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", (ml + w - mr) / 2, h - 16,
                   detail::escape(xlabel));
  o += fmt::format("<text x=\"18\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">{}</text>\n",
                   (mt + h - mb) / 2, (mt + h - mb) / 2, detail::escape(ylabel));
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* col = colours[k % 6];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) pts += fmt::format("{:.2f},{:.2f} ", px(s.x[i]), py(s.y[i]));
    o += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\" points=\"{}\"/>\n", col, pts);
    if (markers) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        o += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2\" fill=\"{}\"/>\n", px(s.x[i]), py(s.y[i]), col);
      }
    }
    if (!s.label.empty()) {
      o += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", ml + 10, mt + 16 + 16 * k, col,
                       detail::escape(s.label));
    }
  }
  o += "</svg>\n";
  return o;
}

/// Thin a dense curve to at most `max_points` samples for plotting.
inline Series decimate(Series s, std::size_t max_points = 2000) {
  if (s.x.size() <= max_points) return s;
  const std::size_t stride = (s.x.size() + max_points - 1) / max_points;
  Series o{s.label, {}, {}};
  for (std::size_t i = 0; i < s.x.size(); i += stride) {
    o.x.push_back(s.x[i]);
    o.y.push_back(s.y[i]);
  }
  return o;
}

}  // namespace lmtpsi::io
