// SPDX-License-Identifier: Apache-2.0
//
// Scenario ingestion and experiment orchestration behind the CLI: JSON config
// parsing with strict schema validation (units converted at this boundary),
// single-design runs, r0 sweeps, the verification harness and CSV artifacts.

#pragma once

#include "isacbeam/designs.hpp"
#include "isacbeam/types.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>

namespace isacbeam::cli {

struct ScenarioConfig {
  Scene scene;
  std::string design = "optimal";
  double r0 = 0.0;
  double beam_width_rad = deg_to_rad(5.0);
  int n_samples = 201;
  designs::SearchParams search;
  conic::SolverSettings solver;
  std::vector<double> sweep_r0;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
};

/// Parses and validates a config document; unknown keys are rejected.
/// Quantities are given in config units (dBm, dB, degrees) and converted to
/// linear/radian here. Throws ConfigError.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::string& path);

SampleGrid make_grid(const ScenarioConfig& cfg);

/// Fixed-format number for CSV cells: 9 significant digits, '.' separator.
std::string format_number(double v);

/// Gain in dB with the -120 dB floor for (near-)nulls.
double gain_db(double gain);

/// FNV-1a hash over the CU and target channel coefficients, as logged in
/// summary.csv so a run can be tied to the exact channels it used.
std::string channel_hash(const Scene& scene);

// Orchestration entry points; they write CSVs under out_dir and return the
// process exit code (0 ok, 1 config/other error, 2 infeasible requirement).
// Failures also emit a machine-readable JSON line on stderr.
int run_design(const ScenarioConfig& cfg, const std::string& out_dir, bool normalize);
int run_sweep(const ScenarioConfig& cfg, const std::string& out_dir);
int run_verify(const std::string& level);
int run_feasibility(const ScenarioConfig& cfg);

void emit_error_json(const std::string& kind, const std::string& message,
                     double max_rate = std::numeric_limits<double>::quiet_NaN());

}  // namespace isacbeam::cli
