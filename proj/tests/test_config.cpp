#include <gtest/gtest.h>

#include "lmtpsi/config.hpp"

using namespace lmtpsi;

namespace {
const double mhz = phys::two_pi * 1e6;

const char* minimal = R"(
[laser]
rabi = "2pi x 100 MHz"
detuning = "2pi x 500 MHz"

[trap]
size = "0.1 um"

[sequence]
order = 3
half_time = "1 ms"
)";

std::vector<std::string> violations(const std::string& text, const std::string& sub = "simulate") {
  try {
    parse_config(text, sub);
  } catch (const ConfigError& e) {
    return e.violations();
  }
  return {};
}

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v) {
    if (s.find(needle) != std::string::npos) return true;
  }
  return false;
}
}  // namespace

TEST(Quantity, Forms) {
  const double g = rb87().linewidth;
  EXPECT_NEAR(parse_quantity("2pi x 100 MHz", Dimension::angular_frequency), 100 * mhz, 1e-3);
  EXPECT_NEAR(parse_quantity("2π×500 MHz", Dimension::angular_frequency), 500 * mhz, 1e-3);
  EXPECT_NEAR(parse_quantity("2pi x 10 sqrt(10) MHz", Dimension::angular_frequency), std::sqrt(10.0) * 10 * mhz,
              1e-3);
  EXPECT_NEAR(parse_quantity("16.7 Gamma", Dimension::angular_frequency), 16.7 * g, 1e-3);
  EXPECT_NEAR(parse_quantity("16.7Γ", Dimension::angular_frequency), 16.7 * g, 1e-3);
  EXPECT_NEAR(parse_quantity("50 rad/s", Dimension::angular_frequency), 50.0, 1e-12);
  EXPECT_NEAR(parse_quantity("0.6 ms", Dimension::time), 0.6e-3, 1e-15);
  EXPECT_NEAR(parse_quantity("6 uK", Dimension::temperature), 6e-6, 1e-18);
  EXPECT_NEAR(parse_quantity("0.1 um", Dimension::length), 0.1e-6, 1e-18);
  EXPECT_NEAR(parse_quantity("3.34 mW/cm2", Dimension::intensity), 3.34e-3, 1e-15);
}

TEST(Quantity, Errors) {
  EXPECT_THROW(parse_quantity("100 MHz", Dimension::angular_frequency), Error);
  EXPECT_THROW(parse_quantity("2pi x 1 ms", Dimension::time), Error);
  EXPECT_THROW(parse_quantity("5 parsecs", Dimension::length), Error);
  EXPECT_THROW(parse_quantity("", Dimension::length), Error);
}

TEST(Toml, Subset) {
  const auto j = parse_toml(R"(
# comment
name = "x"  # trailing
n = 3
f = 2.5
b = true
list = [1, 3, 5]
[a.b]
c = "d"
)");
  EXPECT_EQ(j["name"], "x");
  EXPECT_EQ(j["n"], 3);
  EXPECT_DOUBLE_EQ(j["f"].get<double>(), 2.5);
  EXPECT_EQ(j["b"], true);
  EXPECT_EQ(j["list"].size(), 3u);
  EXPECT_EQ(j["a"]["b"]["c"], "d");
}

TEST(Toml, SyntaxErrorReportsLine) {
  try {
    parse_document("a = 1\nb = [1, 2\nc = 3\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::configuration);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Json, Accepted) {
  const auto c = parse_config(R"({"laser": {"rabi": "2pi x 100 MHz", "detuning": "2pi x 500 MHz"},
    "trap": {"size": "0.1 um"}, "sequence": {"order": [1, 3], "half_time": "1 ms"}})");
  EXPECT_EQ(c.sequence.orders, (std::vector<int>{1, 3}));
}

TEST(Json, SyntaxErrorReportsLine) {
  try {
    parse_document("{\n\"a\": 1,\n\"b\": }\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Config, Minimal) {
  const auto c = parse_config(minimal);
  ASSERT_EQ(c.laser.rabi.size(), 1u);
  EXPECT_NEAR(c.laser.rabi[0], 100 * mhz, 1e-3);
  EXPECT_NEAR(*c.laser.detuning, 500 * mhz, 1e-3);
  EXPECT_EQ(c.sequence.orders, std::vector<int>{3});
  EXPECT_EQ(c.grid.points, 4096u);
  EXPECT_EQ(c.trap.n_max, 32);
  const auto p = c.laser_params(c.laser.rabi[0], 3);
  EXPECT_NEAR(p.two_photon_detuning, LaserParams::recoil_compensation(rb87()), 1e-9);
}

TEST(Config, EvenOrderRejected) {
  const auto v = violations(std::string(minimal) + "");
  EXPECT_TRUE(v.empty());
  std::string text = minimal;
  text.replace(text.find("order = 3"), 9, "order = 4");
  const auto w = violations(text);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_TRUE(mentions(w, "N must be odd"));
  EXPECT_TRUE(mentions(w, "sequence.order"));
}

TEST(Config, AllViolationsReported) {
  const auto v = violations(R"(
bogus = 1
[laser]
rabi = "-3 MHz"
[trap]
size = "0.1 um"
colour = "blue"
[sequence]
order = [1, 4, 6]
[grid]
points = 1001
dimension = 2
)");
  EXPECT_TRUE(mentions(v, "bogus: unknown key"));
  EXPECT_TRUE(mentions(v, "laser.rabi"));
  EXPECT_TRUE(mentions(v, "trap.colour: unknown key"));
  EXPECT_TRUE(mentions(v, "sequence.order[1]"));
  EXPECT_TRUE(mentions(v, "sequence.order[2]"));
  EXPECT_TRUE(mentions(v, "sequence.half_time"));
  EXPECT_TRUE(mentions(v, "grid.points"));
  EXPECT_TRUE(mentions(v, "grid.dimension"));
  EXPECT_GE(v.size(), 8u);
}

TEST(Config, OptimalDetuningFillsDelta) {
  const auto c = parse_config(R"(
[laser]
rabi = "2pi x 200 MHz"
optimal_detuning = true
[trap]
size = "0.1 um"
[sequence]
order = 69
half_time = "10 ms"
)");
  EXPECT_FALSE(c.laser.detuning.has_value());
  EXPECT_NEAR(c.detuning_for(c.laser.rabi[0], 69) / (1700 * mhz), 1.0, 0.05);
}

TEST(Config, MissingDetuningRejectedForSimulate) {
  const auto v = violations(R"(
[laser]
rabi = "2pi x 200 MHz"
[trap]
size = "0.1 um"
[sequence]
half_time = "1 ms"
)");
  EXPECT_TRUE(mentions(v, "laser.detuning"));
}

TEST(Config, SensitivityNeedsOnlyRabi) {
  const auto c = parse_config("[laser]\nrabi = \"2pi x 200 MHz\"\n", "sensitivity");
  EXPECT_EQ(c.sensitivity.n_min, 1);
  EXPECT_EQ(c.sensitivity.n_max, 199);
}

TEST(Presets, AllParse) {
  for (const auto& name : preset_names()) {
    const std::string sub = name == "fig8" ? "sensitivity" : "simulate";
    EXPECT_NO_THROW(parse_config(preset_text(name), sub)) << name;
  }
  EXPECT_THROW(preset_text("fig9"), Error);
}

TEST(Presets, LowRabiPresetParameters) {
  const auto c = parse_config(preset_text("fig5"));
  EXPECT_NEAR(c.laser.rabi[0], 10.0 * std::sqrt(10.0) * mhz, 1e-3);
  EXPECT_NEAR(*c.laser.detuning, 500 * mhz, 1e-3);
  EXPECT_NEAR(c.trap.temperature, 6e-6, 1e-15);
  EXPECT_NEAR(*c.trap.size, 0.1e-6, 1e-15);
  EXPECT_NE(std::find(c.sequence.orders.begin(), c.sequence.orders.end(), 3), c.sequence.orders.end());
}
