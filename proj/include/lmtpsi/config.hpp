#pragma once

// Scenario configuration: quantity strings, a TOML subset, validation and
// the built-in scenario presets.

#include <nlohmann/json.hpp>

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lmtpsi/constants.hpp"
#include "lmtpsi/error.hpp"
#include "lmtpsi/quantum_core.hpp"
#include "lmtpsi/sensitivity.hpp"

namespace lmtpsi {

using json = nlohmann::json;

/// Configuration failure carrying every violation found.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : Error(ErrorKind::configuration, join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "; " : "") + v[i];
    return s;
  }
  std::vector<std::string> violations_;
};

// ---------------------------------------------------------------------------
// Quantities

enum class Dimension { angular_frequency, time, temperature, length, intensity, wavenumber, dimensionless };

inline const char* to_string(Dimension d) {
  switch (d) {
    case Dimension::angular_frequency: return "angular frequency";
    case Dimension::time: return "time";
    case Dimension::temperature: return "temperature";
    case Dimension::length: return "length";
    case Dimension::intensity: return "intensity";
    case Dimension::wavenumber: return "wavenumber";
    case Dimension::dimensionless: return "dimensionless";
  }
  return "quantity";
}

namespace detail {

struct Unit {
  const char* name;
  Dimension dim;
  double scale;
  bool cyclic;  // Hz-type unit: needs an explicit 2pi factor for angular quantities
};

// Intensity is carried in W/cm^2, everything else in SI.
inline const std::vector<Unit>& units() {
  static const std::vector<Unit> u = {
      {"Hz", Dimension::angular_frequency, 1.0, true},
      {"kHz", Dimension::angular_frequency, 1e3, true},
      {"MHz", Dimension::angular_frequency, 1e6, true},
      {"GHz", Dimension::angular_frequency, 1e9, true},
      {"rad/s", Dimension::angular_frequency, 1.0, false},
      {"krad/s", Dimension::angular_frequency, 1e3, false},
      {"Mrad/s", Dimension::angular_frequency, 1e6, false},
      {"s", Dimension::time, 1.0, false},
      {"ms", Dimension::time, 1e-3, false},
      {"us", Dimension::time, 1e-6, false},
      {"\xC2\xB5s", Dimension::time, 1e-6, false},
      {"\xCE\xBCs", Dimension::time, 1e-6, false},
      {"ns", Dimension::time, 1e-9, false},
      {"K", Dimension::temperature, 1.0, false},
      {"mK", Dimension::temperature, 1e-3, false},
      {"uK", Dimension::temperature, 1e-6, false},
      {"\xC2\xB5K", Dimension::temperature, 1e-6, false},
      {"\xCE\xBCK", Dimension::temperature, 1e-6, false},
      {"nK", Dimension::temperature, 1e-9, false},
      {"m", Dimension::length, 1.0, false},
      {"mm", Dimension::length, 1e-3, false},
      {"um", Dimension::length, 1e-6, false},
      {"\xC2\xB5m", Dimension::length, 1e-6, false},
      {"\xCE\xBCm", Dimension::length, 1e-6, false},
      {"nm", Dimension::length, 1e-9, false},
      {"W/cm2", Dimension::intensity, 1.0, false},
      {"W/cm^2", Dimension::intensity, 1.0, false},
      {"mW/cm2", Dimension::intensity, 1e-3, false},
      {"mW/cm^2", Dimension::intensity, 1e-3, false},
      {"1/m", Dimension::wavenumber, 1.0, false},
      {"/m", Dimension::wavenumber, 1.0, false},
      {"1/um", Dimension::wavenumber, 1e6, false},
      {"/um", Dimension::wavenumber, 1e6, false},
  };
  return u;
}

inline bool starts_with(const std::string& s, std::size_t i, const char* p) { return s.compare(i, std::strlen(p), p) == 0; }

}  // namespace detail

/// Parse strings such as "2pi x 100 MHz", "2π×(10√10 MHz)", "16.7 Gamma",
/// "0.6 ms", "6 uK", "3.34 mW/cm2" into SI (W/cm^2 for intensity).
/// `linewidth` resolves the Gamma unit.
inline double parse_quantity(const std::string& text, Dimension dim, double linewidth = rb87().linewidth) {
  const std::string& s = text;
  double value = 1.0;
  bool have_number = false;
  bool two_pi = false;
  bool pending_sqrt = false;
  bool pending_div = false;
  std::string unit;
  std::size_t i = 0;
  auto bad = [&](const std::string& why) -> double {
    fail(ErrorKind::configuration, "cannot parse quantity '" + text + "': " + why);
  };
  auto apply = [&](double f) {
    if (pending_sqrt) f = std::sqrt(f);
    if (pending_div) f = 1.0 / f;
    value *= f;
    pending_sqrt = pending_div = false;
  };
  while (i < s.size()) {
    const unsigned char ch = static_cast<unsigned char>(s[i]);
    if (std::isspace(ch) || ch == '(' || ch == ')') {
      ++i;
    } else if (std::isdigit(ch) || ch == '.' || ((ch == '-' || ch == '+') && !have_number)) {
      char* end = nullptr;
      const double v = std::strtod(s.c_str() + i, &end);
      if (end == s.c_str() + i) return bad("bad number");
      i = static_cast<std::size_t>(end - s.c_str());
      // "2pi" / "2π" marks an angular frequency given in cycles.
      std::size_t j = i;
      while (j < s.size() && s[j] == ' ') ++j;
      if (v == 2.0 && !have_number && (detail::starts_with(s, j, "pi") || detail::starts_with(s, j, "\xCF\x80"))) {
        two_pi = true;
        i = j + 2;
        continue;
      }
      apply(v);
      have_number = true;
    } else if (detail::starts_with(s, i, "pi") && !std::isalpha(static_cast<unsigned char>(s[i + 2]))) {
      apply(phys::pi);
      i += 2;
    } else if (detail::starts_with(s, i, "\xCF\x80")) {  // π
      apply(phys::pi);
      i += 2;
    } else if (detail::starts_with(s, i, "sqrt")) {
      pending_sqrt = true;
      i += 4;
    } else if (detail::starts_with(s, i, "\xE2\x88\x9A")) {  // √
      pending_sqrt = true;
      i += 3;
    } else if (detail::starts_with(s, i, "\xC3\x97") || detail::starts_with(s, i, "\xC2\xB7")) {  // × ·
      i += 2;
    } else if (ch == '*' || (ch == 'x' && (i + 1 >= s.size() || !std::isalpha(static_cast<unsigned char>(s[i + 1]))))) {
      ++i;
    } else if (ch == '/' && i + 1 < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[i + 1])) || s[i + 1] == '(')) {
      pending_div = true;
      ++i;
    } else {
      // Everything left (minus grouping and spaces) is the unit.
      for (std::size_t j = i; j < s.size(); ++j) {
        if (s[j] != ' ' && s[j] != '(' && s[j] != ')') unit += s[j];
      }
      break;
    }
  }
  if (pending_sqrt || pending_div) return bad("dangling operator");
  if (!have_number && unit.empty()) return bad("no value");
  if (unit.empty()) {
    if (two_pi) {
      if (dim != Dimension::angular_frequency) return bad("2pi prefix on a non-frequency quantity");
      return phys::two_pi * value;
    }
    return value;
  }
  if (unit == "Gamma" || unit == "\xCE\x93") {
    if (dim != Dimension::angular_frequency) return bad("Gamma is a frequency unit");
    if (two_pi) return bad("Gamma already is an angular frequency");
    return value * linewidth;
  }
  for (const auto& u : detail::units()) {
    if (unit != u.name) continue;
    if (u.dim != dim) return bad(std::string("expected a ") + to_string(dim) + ", got unit '" + unit + "'");
    if (u.cyclic && !two_pi) return bad("angular frequencies in " + unit + " need the 2pi prefix (e.g. '2pi x 1 MHz')");
    if (two_pi && u.dim != Dimension::angular_frequency) return bad("2pi prefix on a non-frequency quantity");
    return (two_pi ? phys::two_pi : 1.0) * value * u.scale;
  }
  return bad("unknown unit '" + unit + "'");
}

// ---------------------------------------------------------------------------
// TOML subset: [tables], [a.b] tables, key = value with strings, numbers,
// booleans and single-line arrays of those; '#' comments.

namespace detail {

class TomlParser {
 public:
  explicit TomlParser(const std::string& text) : text_(text) {}

  json parse() {
    json root = json::object();
    json* table = &root;
    std::istringstream in(text_);
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_;
      std::string l = strip(remove_comment(raw));
      if (l.empty()) continue;
      if (l.front() == '[') {
        if (l.back() != ']' || l.size() < 3) error("malformed table header");
        const std::string name = strip(l.substr(1, l.size() - 2));
        table = &root;
        for (const auto& part : split(name, '.')) {
          const std::string key = strip(part);
          if (!valid_key(key)) error("bad table name '" + name + "'");
          json& t = (*table)[key];
          if (t.is_null()) t = json::object();
          if (!t.is_object()) error("'" + key + "' is not a table");
          table = &t;
        }
        continue;
      }
      const auto eq = l.find('=');
      if (eq == std::string::npos) error("expected 'key = value'");
      const std::string key = strip(l.substr(0, eq));
      if (!valid_key(key)) error("bad key '" + key + "'");
      if (table->contains(key)) error("duplicate key '" + key + "'");
      std::size_t pos = 0;
      const std::string rhs = strip(l.substr(eq + 1));
      json v = value(rhs, pos);
      skip_ws(rhs, pos);
      if (pos != rhs.size()) error("unexpected text after value");
      (*table)[key] = std::move(v);
    }
    return root;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::configuration, "syntax error at line " + std::to_string(line_) + ": " + what);
  }

  static std::string strip(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  static std::string remove_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_str = !in_str;
      if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
  }

  static std::vector<std::string> split(const std::string& s, char c) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
      if (ch == c) {
        out.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    out.push_back(cur);
    return out;
  }

  static bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k) {
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
    }
    return true;
  }

  static void skip_ws(const std::string& s, std::size_t& p) {
    while (p < s.size() && (s[p] == ' ' || s[p] == '\t')) ++p;
  }

  json value(const std::string& s, std::size_t& p) {
    skip_ws(s, p);
    if (p >= s.size()) error("missing value");
    if (s[p] == '"') {
      std::string out;
      ++p;
      while (p < s.size() && s[p] != '"') {
        if (s[p] == '\\' && p + 1 < s.size()) {
          const char e = s[++p];
          out += e == 'n' ? '\n' : e == 't' ? '\t' : e;
        } else {
          out += s[p];
        }
        ++p;
      }
      if (p >= s.size()) error("unterminated string");
      ++p;
      return out;
    }
    if (s[p] == '[') {
      json arr = json::array();
      ++p;
      skip_ws(s, p);
      if (p < s.size() && s[p] == ']') {
        ++p;
        return arr;
      }
      while (true) {
        arr.push_back(value(s, p));
        skip_ws(s, p);
        if (p >= s.size()) error("unterminated array");
        if (s[p] == ',') {
          ++p;
          skip_ws(s, p);
          if (p < s.size() && s[p] == ']') {
            ++p;
            return arr;
          }
          continue;
        }
        if (s[p] == ']') {
          ++p;
          return arr;
        }
        error("expected ',' or ']' in array");
      }
    }
    if (s.compare(p, 4, "true") == 0) {
      p += 4;
      return true;
    }
    if (s.compare(p, 5, "false") == 0) {
      p += 5;
      return false;
    }
    std::size_t e = p;
    while (e < s.size() && s[e] != ',' && s[e] != ']' && s[e] != ' ' && s[e] != '\t') ++e;
    std::string tok = s.substr(p, e - p);
    std::string clean;
    for (char c : tok) {
      if (c != '_') clean += c;
    }
    if (clean.empty()) error("missing value");
    const bool is_int = clean.find_first_of(".eE") == std::string::npos && clean != "inf" && clean != "nan";
    char* end = nullptr;
    if (is_int) {
      const long long v = std::strtoll(clean.c_str(), &end, 10);
      if (*end != '\0') error("bad value '" + tok + "' (strings must be quoted)");
      p = e;
      return v;
    }
    const double v = std::strtod(clean.c_str(), &end);
    if (*end != '\0') error("bad value '" + tok + "' (strings must be quoted)");
    p = e;
    return v;
  }

  const std::string& text_;
  int line_ = 0;
};

inline int line_of_offset(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

}  // namespace detail

inline json parse_toml(const std::string& text) { return detail::TomlParser(text).parse(); }

/// JSON when the text starts with '{', the TOML subset otherwise.
inline json parse_document(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      fail(ErrorKind::configuration, "syntax error at line " +
                                         std::to_string(detail::line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0)) +
                                         ": " + e.what());
    }
  }
  return parse_toml(text);
}

// ---------------------------------------------------------------------------
// Scenario

struct ScenarioConfig {
  std::string species = "rb87";

  struct Laser {
    std::vector<double> rabi;                 // Omega_0 list, rad/s
    std::optional<double> detuning;           // Delta_0, rad/s
    bool optimal_detuning = false;
    std::optional<double> two_photon_detuning;  // delta_0; unset = recoil compensated
    bool light_shift = true;
    int direction = +1;
  } laser;

  struct Trap {
    std::optional<double> frequency;  // rad/s
    std::optional<double> size;       // m
    double temperature = 6e-6;        // K
    int n_max = 32;
    WeightMode weights = WeightMode::linear_boltzmann;
  } trap;

  struct Sequence {
    std::vector<int> orders{1};
    double half_time = 0.0;  // T, s
    bool compensation = true;
    double ladder_gap = 0.0;
    bool ideal_pulses = false;
  } sequence;

  double rotation = 0.0;  // rad/s

  struct Grid {
    int dimension = 1;
    std::size_t points = 4096;
    std::optional<double> extent;  // 1/m
    int quadrature_nodes = 8;
    bool beam_axis_thermal = true;
  } grid;

  struct Sensitivity {
    int n_min = 1;
    int n_max = 199;
    DetuningPolicy policy = DetuningPolicy::per_n_optimal;
  } sensitivity;

  struct Output {
    std::string directory = "out";
    std::vector<std::string> formats{"csv", "json", "svg"};
  } output;

  bool has_format(const std::string& f) const {
    for (const auto& x : output.formats) {
      if (x == f) return true;
    }
    return false;
  }

  AtomSpecies atom() const { return species_by_name(species); }

  /// Delta_0 for a given Omega_0 and N, honouring optimal_detuning.
  double detuning_for(double rabi, int order) const {
    if (laser.optimal_detuning) return optimal_detuning(order, rabi, atom());
    return *laser.detuning;
  }

  LaserParams laser_params(double rabi, int order) const {
    const auto sp = atom();
    LaserParams p = LaserParams::symmetric(rabi, detuning_for(rabi, order), sp);
    if (laser.two_photon_detuning) p.two_photon_detuning = *laser.two_photon_detuning;
    p.include_light_shift = laser.light_shift;
    p.direction = laser.direction;
    return p;
  }

  double trap_size() const {
    if (trap.size) return *trap.size;
    return std::sqrt(phys::hbar / (atom().mass * *trap.frequency));
  }

  ThermalEnsemble ensemble(bool strict) const {
    return ThermalEnsemble::from_trap_size(trap_size(), trap.temperature, trap.n_max, atom(), trap.weights, strict);
  }

  MomentumGrid momentum_grid(const ThermalEnsemble& ens) const {
    const double extent = grid.extent ? *grid.extent : default_grid_extent(ens, atom());
    return MomentumGrid::make(grid.points, extent, grid.dimension);
  }
};

namespace detail {

class Validator {
 public:
  explicit Validator(double linewidth) : linewidth_(linewidth) {}

  std::vector<std::string> errors;

  void error(const std::string& path, const std::string& what) { errors.push_back(path + ": " + what); }

  void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) {
      error(path.empty() ? "<root>" : path, "expected a table");
      return;
    }
    for (const auto& [k, v] : obj.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || k == a;
      if (!ok) error(join(path, k), "unknown key");
    }
  }

  static std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

  std::optional<double> quantity(const json& v, const std::string& path, Dimension dim) {
    try {
      if (v.is_number()) return v.get<double>();
      if (v.is_string()) return parse_quantity(v.get<std::string>(), dim, linewidth_);
      error(path, "expected a number or quantity string");
    } catch (const Error& e) {
      error(path, e.what());
    }
    return std::nullopt;
  }

  std::optional<double> positive(const json& obj, const std::string& path, const char* key, Dimension dim) {
    if (!obj.contains(key)) return std::nullopt;
    auto q = quantity(obj.at(key), join(path, key), dim);
    if (q && !(*q > 0.0 && std::isfinite(*q))) {
      error(join(path, key), "must be positive");
      return std::nullopt;
    }
    return q;
  }

  std::optional<bool> boolean(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    if (!obj.at(key).is_boolean()) {
      error(join(path, key), "expected true or false");
      return std::nullopt;
    }
    return obj.at(key).get<bool>();
  }

  std::optional<long long> integer(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) return v.get<long long>();
    error(join(path, key), "expected an integer");
    return std::nullopt;
  }

  std::optional<std::string> string(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    if (!obj.at(key).is_string()) {
      error(join(path, key), "expected a string");
      return std::nullopt;
    }
    return obj.at(key).get<std::string>();
  }

 private:
  double linewidth_;
};

}  // namespace detail

/// Validate a parsed document. `subcommand` selects which blocks are required.
inline ScenarioConfig config_from_json(const json& doc, const std::string& subcommand = "simulate") {
  ScenarioConfig c;
  double linewidth = rb87().linewidth;
  std::vector<std::string> early;
  if (doc.is_object() && doc.contains("species")) {
    if (doc["species"].is_string()) {
      c.species = doc["species"].get<std::string>();
      try {
        linewidth = species_by_name(c.species).linewidth;
      } catch (const Error&) {
        early.push_back("species: unknown species '" + c.species + "'");
      }
    } else {
      early.push_back("species: expected a string");
    }
  }
  detail::Validator v(linewidth);
  v.errors = early;
  v.check_keys(doc, "", {"species", "laser", "trap", "sequence", "rotation", "grid", "sensitivity", "output"});
  if (!doc.is_object()) throw ConfigError(v.errors);

  const bool sim = subcommand == "simulate";
  const json empty = json::object();

  // laser
  const json& laser = doc.contains("laser") ? doc["laser"] : empty;
  v.check_keys(laser, "laser", {"rabi", "detuning", "optimal_detuning", "two_photon_detuning", "light_shift",
                                "direction"});
  if (laser.is_object()) {
    if (laser.contains("rabi")) {
      const auto& r = laser["rabi"];
      if (r.is_array()) {
        if (r.empty()) v.error("laser.rabi", "empty list");
        for (std::size_t i = 0; i < r.size(); ++i) {
          const std::string p = "laser.rabi[" + std::to_string(i) + "]";
          auto q = v.quantity(r[i], p, Dimension::angular_frequency);
          if (q && !(*q > 0.0)) v.error(p, "must be positive");
          else if (q) c.laser.rabi.push_back(*q);
        }
      } else if (auto q = v.positive(laser, "laser", "rabi", Dimension::angular_frequency)) {
        c.laser.rabi.push_back(*q);
      }
    } else if (subcommand != "convert") {
      v.error("laser.rabi", "required");
    }
    c.laser.detuning = v.positive(laser, "laser", "detuning", Dimension::angular_frequency);
    if (auto b = v.boolean(laser, "laser", "optimal_detuning")) c.laser.optimal_detuning = *b;
    if (laser.contains("two_photon_detuning")) {
      const auto& t = laser["two_photon_detuning"];
      if (t.is_string() && (t == "recoil" || t == "recoil-compensated")) {
        c.laser.two_photon_detuning.reset();
      } else {
        c.laser.two_photon_detuning = v.quantity(t, "laser.two_photon_detuning", Dimension::angular_frequency);
      }
    }
    if (auto b = v.boolean(laser, "laser", "light_shift")) c.laser.light_shift = *b;
    if (auto d = v.integer(laser, "laser", "direction")) {
      if (*d != 1 && *d != -1) v.error("laser.direction", "must be +1 or -1");
      else c.laser.direction = static_cast<int>(*d);
    }
    if (sim && !c.laser.detuning && !c.laser.optimal_detuning && !laser.contains("detuning")) {
      v.error("laser.detuning", "required unless optimal_detuning = true");
    }
  }

  // trap
  const json& trap = doc.contains("trap") ? doc["trap"] : empty;
  v.check_keys(trap, "trap", {"frequency", "size", "temperature", "n_max", "weights"});
  if (trap.is_object()) {
    c.trap.frequency = v.positive(trap, "trap", "frequency", Dimension::angular_frequency);
    c.trap.size = v.positive(trap, "trap", "size", Dimension::length);
    if (c.trap.frequency && c.trap.size) v.error("trap", "give either frequency or size, not both");
    if (sim && !c.trap.frequency && !c.trap.size && !trap.contains("frequency") && !trap.contains("size")) {
      v.error("trap.size", "required (or trap.frequency)");
    }
    if (auto t = v.positive(trap, "trap", "temperature", Dimension::temperature)) c.trap.temperature = *t;
    if (auto n = v.integer(trap, "trap", "n_max")) {
      if (*n < 0 || *n > hermite_max_order) {
        v.error("trap.n_max", "must be in [0, " + std::to_string(hermite_max_order) + "]");
      } else {
        c.trap.n_max = static_cast<int>(*n);
      }
    }
    if (auto s = v.string(trap, "trap", "weights")) {
      try {
        c.trap.weights = weight_mode_from_string(*s);
      } catch (const Error& e) {
        v.error("trap.weights", e.what());
      }
    }
  }

  // sequence
  const json& seq = doc.contains("sequence") ? doc["sequence"] : empty;
  v.check_keys(seq, "sequence", {"order", "half_time", "compensation", "ladder_gap", "ideal_pulses"});
  if (seq.is_object()) {
    if (seq.contains("order")) {
      c.sequence.orders.clear();
      const json list = seq["order"].is_array() ? seq["order"] : json::array({seq["order"]});
      if (list.empty()) v.error("sequence.order", "empty list");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string p = seq["order"].is_array() ? "sequence.order[" + std::to_string(i) + "]" : "sequence.order";
        if (!list[i].is_number_integer()) {
          v.error(p, "expected an integer");
          continue;
        }
        const long long n = list[i].get<long long>();
        if (n < 1 || n % 2 == 0) v.error(p, "N must be odd and >= 1 (got " + std::to_string(n) + ")");
        else c.sequence.orders.push_back(static_cast<int>(n));
      }
    }
    if (auto t = v.positive(seq, "sequence", "half_time", Dimension::time)) c.sequence.half_time = *t;
    else if (sim && !seq.contains("half_time")) v.error("sequence.half_time", "required");
    if (auto b = v.boolean(seq, "sequence", "compensation")) c.sequence.compensation = *b;
    if (seq.contains("ladder_gap")) {
      auto g = v.quantity(seq["ladder_gap"], "sequence.ladder_gap", Dimension::time);
      if (g && *g < 0.0) v.error("sequence.ladder_gap", "must be non-negative");
      else if (g) c.sequence.ladder_gap = *g;
    }
    if (auto b = v.boolean(seq, "sequence", "ideal_pulses")) c.sequence.ideal_pulses = *b;
  }
  if (sim && !doc.contains("sequence")) v.error("sequence", "required");
  if (sim && !doc.contains("trap")) v.error("trap", "required");

  if (doc.contains("rotation")) {
    if (auto r = v.quantity(doc["rotation"], "rotation", Dimension::angular_frequency)) c.rotation = *r;
  }

  // grid
  const json& grid = doc.contains("grid") ? doc["grid"] : empty;
  v.check_keys(grid, "grid", {"dimension", "points", "extent", "quadrature_nodes", "beam_axis_thermal"});
  if (grid.is_object()) {
    if (auto d = v.integer(grid, "grid", "dimension")) {
      if (*d != 1 && *d != 2) v.error("grid.dimension", "must be 1 or 2");
      else if (*d == 2) v.error("grid.dimension", "2D transverse grids are not implemented");
      else c.grid.dimension = 1;
    }
    if (auto n = v.integer(grid, "grid", "points")) {
      if (*n < 2 || *n % 2 != 0) v.error("grid.points", "must be even and >= 2");
      else c.grid.points = static_cast<std::size_t>(*n);
    }
    c.grid.extent = v.positive(grid, "grid", "extent", Dimension::wavenumber);
    if (auto q = v.integer(grid, "grid", "quadrature_nodes")) {
      if (*q < 1 || *q > 64) v.error("grid.quadrature_nodes", "must be in [1, 64]");
      else c.grid.quadrature_nodes = static_cast<int>(*q);
    }
    if (auto b = v.boolean(grid, "grid", "beam_axis_thermal")) c.grid.beam_axis_thermal = *b;
  }

  // sensitivity
  const json& sens = doc.contains("sensitivity") ? doc["sensitivity"] : empty;
  v.check_keys(sens, "sensitivity", {"n_min", "n_max", "detuning_policy"});
  if (sens.is_object()) {
    if (auto n = v.integer(sens, "sensitivity", "n_min")) c.sensitivity.n_min = static_cast<int>(*n);
    if (auto n = v.integer(sens, "sensitivity", "n_max")) c.sensitivity.n_max = static_cast<int>(*n);
    if (c.sensitivity.n_min < 1) v.error("sensitivity.n_min", "must be >= 1");
    if (c.sensitivity.n_max < c.sensitivity.n_min) v.error("sensitivity.n_max", "must be >= n_min");
    if (auto p = v.string(sens, "sensitivity", "detuning_policy")) {
      if (*p == "per-n-optimal") c.sensitivity.policy = DetuningPolicy::per_n_optimal;
      else if (*p == "fixed") c.sensitivity.policy = DetuningPolicy::fixed;
      else v.error("sensitivity.detuning_policy", "must be 'per-n-optimal' or 'fixed'");
    }
  }
  if (subcommand == "sensitivity" && c.sensitivity.policy == DetuningPolicy::fixed && !c.laser.detuning) {
    v.error("laser.detuning", "required for the fixed detuning policy");
  }

  // output
  const json& out = doc.contains("output") ? doc["output"] : empty;
  v.check_keys(out, "output", {"directory", "formats"});
  if (out.is_object()) {
    if (auto d = v.string(out, "output", "directory")) c.output.directory = *d;
    if (out.contains("formats")) {
      const auto& f = out["formats"];
      if (!f.is_array()) {
        v.error("output.formats", "expected a list");
      } else {
        c.output.formats.clear();
        for (std::size_t i = 0; i < f.size(); ++i) {
          const std::string p = "output.formats[" + std::to_string(i) + "]";
          if (!f[i].is_string()) {
            v.error(p, "expected a string");
            continue;
          }
          const auto s = f[i].get<std::string>();
          if (s != "csv" && s != "json" && s != "svg") v.error(p, "unknown format '" + s + "'");
          else c.output.formats.push_back(s);
        }
      }
    }
  }

  if (!v.errors.empty()) throw ConfigError(v.errors);
  return c;
}

inline ScenarioConfig parse_config(const std::string& text, const std::string& subcommand = "simulate") {
  return config_from_json(parse_document(text), subcommand);
}

// ---------------------------------------------------------------------------
// Built-in scenario presets.

inline std::vector<std::string> preset_names() { return {"fig4", "fig5", "fig6", "fig7", "fig8"}; }

inline std::string preset_text(const std::string& name) {
  const std::string common = R"(
species = "rb87"
rotation = "50 rad/s"

[trap]
size = "0.1 um"
temperature = "6 uK"
n_max = 80
weights = "linear-boltzmann"

[grid]
points = 16384
quadrature_nodes = 8
)";
  if (name == "fig4") {
    return common + R"(
[laser]
rabi = "2pi x 100 MHz"
detuning = "2pi x 500 MHz"

[sequence]
order = [1, 3]
half_time = "0.6 ms"
ideal_pulses = true
)";
  }
  if (name == "fig5") {
    return common + R"(
[laser]
rabi = "2pi x 10 sqrt(10) MHz"
detuning = "2pi x 500 MHz"

[sequence]
order = [1, 3]
half_time = "0.6 ms"
)";
  }
  if (name == "fig6") {
    return common + R"(
[laser]
rabi = ["2pi x 10 sqrt(10) MHz", "2pi x 100 MHz"]
detuning = "2pi x 500 MHz"

[sequence]
order = 3
half_time = "0.6 ms"
)";
  }
  if (name == "fig7") {
    return common + R"(
[laser]
rabi = "2pi x 100 MHz"
detuning = "2pi x 500 MHz"

[sequence]
order = 7
half_time = "0.6 ms"
)";
  }
  if (name == "fig8") {
    return R"(
species = "rb87"

[laser]
rabi = ["2pi x 100 MHz", "2pi x 200 MHz"]
optimal_detuning = true

[sensitivity]
n_min = 1
n_max = 199
detuning_policy = "per-n-optimal"
)";
  }
  fail(ErrorKind::configuration, "unknown preset '" + name + "' (fig4 | fig5 | fig6 | fig7 | fig8)");
}

}  // namespace lmtpsi
