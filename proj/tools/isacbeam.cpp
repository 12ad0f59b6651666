// SPDX-License-Identifier: Apache-2.0
//
// isacbeam CLI: secrecy-constrained transmit beamforming designs.
//   isacbeam run <config.json> [--out DIR] [--normalize]
//   isacbeam sweep <config.json> [--out DIR]
//   isacbeam verify [--level fast|full]
//   isacbeam feasibility <config.json>

#include "isacbeam/scenario.hpp"

#include <CLI11.hpp>

#include <clocale>

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");

  CLI::App app{"secrecy-constrained ISAC transmit beamforming designs"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool normalize = false;
  std::string level = "fast";

  CLI::App* run = app.add_subcommand("run", "compute one design, write beampattern/summary CSVs");
  run->add_option("config", config_path, "scenario config (JSON)")->required();
  run->add_option("--out", out_dir, "output directory (default: config output_dir)");
  run->add_flag("--normalize", normalize, "also emit gains relative to each curve's peak");

  CLI::App* sweep = app.add_subcommand("sweep", "matching error vs secrecy rate threshold");
  sweep->add_option("config", config_path, "scenario config (JSON)")->required();
  sweep->add_option("--out", out_dir, "output directory (default: config output_dir)");

  CLI::App* verify = app.add_subcommand("verify", "run the self-verification suite");
  verify->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));

  CLI::App* feas = app.add_subcommand("feasibility", "print the maximum secrecy rate");
  feas->add_option("config", config_path, "scenario config (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  using namespace isacbeam;
  try {
    if (verify->parsed()) return cli::run_verify(level);
    const cli::ScenarioConfig cfg = cli::load_config(config_path);
    const std::string dir = out_dir.empty() ? cfg.output_dir : out_dir;
    if (run->parsed()) return cli::run_design(cfg, dir, normalize);
    if (sweep->parsed()) return cli::run_sweep(cfg, dir);
    if (feas->parsed()) return cli::run_feasibility(cfg);
  } catch (const ConfigError& e) {
    cli::emit_error_json("config", e.what());
    return 1;
  } catch (const std::exception& e) {
    cli::emit_error_json("failure", e.what());
    return 1;
  }
  return 1;
}
