#include <CLI11.hpp>

#include <iostream>

#include "lmtpsi/app.hpp"

int main(int argc, char** argv) {
  using namespace lmtpsi;
  CLI::App cli{"Point-source atom interferometry with large momentum transfer"};
  cli.set_version_flag("--version", std::string(version));
  cli.require_subcommand(1);

  app::Options opt;
  std::string formats;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Scenario file (TOML or JSON)")->check(CLI::ExistingFile);
    sub->add_option("--preset", opt.preset, "Built-in scenario")
        ->check(CLI::IsMember({"fig4", "fig5", "fig6", "fig7", "fig8"}));
    sub->add_option("--out", opt.out_dir, "Output directory");
    sub->add_option("--format", formats, "Comma-separated output formats: csv,json,svg");
    sub->add_flag("--strict", opt.strict, "Treat thermal-tail truncation as an error");
  };

  auto* simulate = cli.add_subcommand("simulate", "Run the momentum-space interferometer simulation");
  add_common(simulate);
  simulate->add_flag("--allow-large-order", opt.allow_large_order, "Permit N above the desk-scale limit");
  auto* sens = cli.add_subcommand("sensitivity", "Scan the improvement factor over N");
  add_common(sens);
  auto* optim = cli.add_subcommand("optimum", "Optimal detuning, eps_max and N_opt");
  add_common(optim);
  auto* conv = cli.add_subcommand("convert", "Convert between beam intensity and one-photon Rabi frequency");
  conv->add_option("--rabi", opt.rabi, "Rabi frequency, e.g. '16.7 Gamma' or '2pi x 100 MHz'");
  conv->add_option("--intensity", opt.intensity, "Intensity, e.g. '3.34 mW/cm2'");
  conv->add_option("--transition", opt.transition, "cycling | upper-raman | both-raman")
      ->check(CLI::IsMember({"cycling", "upper-raman", "both-raman"}));
  conv->add_option("--out", opt.out_dir, "Directory for convert.json and species.json");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : app::config;
  }

  opt.subcommand = cli.get_subcommands().front()->get_name();
  if (!formats.empty()) {
    std::vector<std::string> list;
    std::string cur;
    for (char c : formats + ",") {
      if (c == ',') {
        if (!cur.empty()) list.push_back(cur);
        cur.clear();
      } else if (c != ' ') {
        cur += c;
      }
    }
    opt.formats = list;
  }
  return app::run(opt, std::cout, std::cerr);
}
