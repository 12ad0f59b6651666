// SPDX-License-Identifier: Apache-2.0

#include "isacbeam/scenario.hpp"

#include "isacbeam/model.hpp"
#include "isacbeam/oracle.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace isacbeam::cli {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where,
                  const std::vector<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ConfigError("unknown field '" + it.key() + "' in " + where);
  }
}

double get_number(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key) || !obj[key].is_number())
    throw ConfigError(where + ": missing numeric field '" + key + "'");
  return obj[key].get<double>();
}

double power_field_w(const json& obj, const std::string& where, const std::string& base) {
  const std::string dbm = base + "_dbm";
  const std::string watts = base + "_w";
  const bool has_dbm = obj.contains(dbm);
  const bool has_w = obj.contains(watts);
  if (has_dbm == has_w)
    throw ConfigError(where + ": exactly one of '" + dbm + "' and '" + watts +
                      "' must be given");
  return has_dbm ? dbm_to_watts(get_number(obj, where, dbm))
                 : get_number(obj, where, watts);
}

Target parse_target(const json& t, const std::string& where) {
  require_keys(t, where,
               {"angle_deg", "pathloss_db", "reference_pathloss_db", "distance_m",
                "eavesdropper", "noise_dbm", "noise_w"});
  Target target;
  target.angle_rad = deg_to_rad(get_number(t, where, "angle_deg"));
  const bool end_to_end = t.contains("pathloss_db");
  const bool split = t.contains("reference_pathloss_db") || t.contains("distance_m");
  if (end_to_end == split)
    throw ConfigError(where + ": give either 'pathloss_db' or "
                              "'reference_pathloss_db' + 'distance_m'");
  if (end_to_end) {
    target.reference_pathloss = loss_db_to_linear(get_number(t, where, "pathloss_db"));
    target.distance_m = 1.0;
  } else {
    target.reference_pathloss =
        loss_db_to_linear(get_number(t, where, "reference_pathloss_db"));
    target.distance_m = get_number(t, where, "distance_m");
  }
  target.is_eavesdropper = t.value("eavesdropper", false);
  if (target.is_eavesdropper) {
    target.noise_power_w = power_field_w(t, where, "noise");
  } else if (t.contains("noise_dbm") || t.contains("noise_w")) {
    throw ConfigError(where + ": noise power is only meaningful for eavesdroppers");
  }
  return target;
}

}  // namespace

ScenarioConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  require_keys(doc, "config",
               {"scene", "design", "secrecy_rate_bpshz", "beam_width_deg", "n_samples",
                "search", "solver", "sweep_r0_bpshz", "output_dir", "seed"});
  if (!doc.contains("scene")) throw ConfigError("config: missing 'scene'");

  ScenarioConfig cfg;
  const json& sc = doc["scene"];
  require_keys(sc, "scene",
               {"n_antennas", "antenna_spacing_ratio", "power_budget_dbm",
                "power_budget_w", "cu", "targets"});
  cfg.scene.n_antennas = static_cast<int>(get_number(sc, "scene", "n_antennas"));
  cfg.scene.antenna_spacing_ratio = sc.value("antenna_spacing_ratio", 0.5);
  cfg.scene.power_budget_w = power_field_w(sc, "scene", "power_budget");

  if (!sc.contains("cu") || !sc["cu"].is_object())
    throw ConfigError("scene: missing 'cu' object");
  const json& cu = sc["cu"];
  require_keys(cu, "scene.cu",
               {"angle_deg", "pathloss_db", "channel", "noise_dbm", "noise_w"});
  cfg.scene.cu_noise_power_w = power_field_w(cu, "scene.cu", "noise");
  const bool cu_los = cu.contains("angle_deg");
  const bool cu_explicit = cu.contains("channel");
  if (cu_los == cu_explicit)
    throw ConfigError("scene.cu: give either 'angle_deg' + 'pathloss_db' or 'channel'");
  if (cu_los) {
    Target pseudo;
    pseudo.angle_rad = deg_to_rad(get_number(cu, "scene.cu", "angle_deg"));
    pseudo.reference_pathloss = loss_db_to_linear(get_number(cu, "scene.cu", "pathloss_db"));
    pseudo.distance_m = 1.0;
    cfg.scene.cu_channel =
        model::los_channel(pseudo, cfg.scene.n_antennas, cfg.scene.antenna_spacing_ratio);
  } else {
    const json& ch = cu["channel"];
    if (!ch.is_array() || ch.size() != static_cast<size_t>(cfg.scene.n_antennas))
      throw ConfigError("scene.cu.channel: expected n_antennas [re, im] pairs");
    cfg.scene.cu_channel.resize(cfg.scene.n_antennas);
    for (size_t i = 0; i < ch.size(); ++i) {
      if (!ch[i].is_array() || ch[i].size() != 2)
        throw ConfigError("scene.cu.channel: entries must be [re, im] pairs");
      cfg.scene.cu_channel(static_cast<int>(i)) =
          Complex(ch[i][0].get<double>(), ch[i][1].get<double>());
    }
  }

  if (!sc.contains("targets") || !sc["targets"].is_array() || sc["targets"].empty())
    throw ConfigError("scene: missing non-empty 'targets' array");
  for (size_t k = 0; k < sc["targets"].size(); ++k) {
    cfg.scene.targets.push_back(
        parse_target(sc["targets"][k], "scene.targets[" + std::to_string(k) + "]"));
  }

  cfg.design = doc.value("design", std::string("optimal"));
  if (cfg.design != "optimal" && cfg.design != "zf" && cfg.design != "separate" &&
      cfg.design != "sensing_only")
    throw ConfigError("config: unknown design '" + cfg.design + "'");
  cfg.r0 = doc.value("secrecy_rate_bpshz", 0.0);
  if (cfg.r0 < 0.0) throw ConfigError("config: secrecy_rate_bpshz must be nonnegative");
  cfg.beam_width_rad = deg_to_rad(doc.value("beam_width_deg", 5.0));
  if (cfg.beam_width_rad <= 0.0) throw ConfigError("config: beam_width_deg must be positive");
  cfg.n_samples = doc.value("n_samples", 201);
  if (cfg.n_samples < 2) throw ConfigError("config: n_samples must be at least 2");

  if (doc.contains("search")) {
    const json& s = doc["search"];
    require_keys(s, "search", {"n_grid", "n_refine", "refine_points", "gamma_lo"});
    cfg.search.n_grid = s.value("n_grid", cfg.search.n_grid);
    cfg.search.n_refine = s.value("n_refine", cfg.search.n_refine);
    cfg.search.refine_points = s.value("refine_points", cfg.search.refine_points);
    cfg.search.gamma_lo = s.value("gamma_lo", cfg.search.gamma_lo);
    if (cfg.search.n_grid < 2 || cfg.search.refine_points < 2 || cfg.search.gamma_lo <= 0.0)
      throw ConfigError("config: invalid search parameters");
  }
  if (doc.contains("solver")) {
    const json& s = doc["solver"];
    require_keys(s, "solver", {"tol_feas", "tol_gap", "max_iters"});
    cfg.solver.tol_feas = s.value("tol_feas", cfg.solver.tol_feas);
    cfg.solver.tol_gap = s.value("tol_gap", cfg.solver.tol_gap);
    cfg.solver.max_iters = s.value("max_iters", cfg.solver.max_iters);
    if (cfg.solver.tol_feas <= 0.0 || cfg.solver.tol_gap <= 0.0 || cfg.solver.max_iters < 1)
      throw ConfigError("config: invalid solver parameters");
  }
  if (doc.contains("sweep_r0_bpshz")) {
    for (const auto& v : doc["sweep_r0_bpshz"]) {
      if (!v.is_number()) throw ConfigError("config: sweep_r0_bpshz must be numeric");
      cfg.sweep_r0.push_back(v.get<double>());
    }
    for (size_t i = 1; i < cfg.sweep_r0.size(); ++i) {
      if (cfg.sweep_r0[i] < cfg.sweep_r0[i - 1])
        throw ConfigError("config: sweep_r0_bpshz must be sorted ascending");
    }
  }
  cfg.output_dir = doc.value("output_dir", std::string("out"));
  cfg.seed = doc.value("seed", std::uint64_t{1});

  try {
    cfg.scene.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("scene: ") + e.what());
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(doc);
}

SampleGrid make_grid(const ScenarioConfig& cfg) {
  return model::desired_beampattern(cfg.scene, cfg.beam_width_rad, cfg.n_samples);
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

double gain_db(double gain) {
  if (gain < 1e-12) return -120.0;
  return 10.0 * std::log10(gain);
}

std::string channel_hash(const Scene& scene) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](double v) {
    std::uint64_t bits = 0;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(v));
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xff;
      h *= 0x100000001b3ull;
    }
  };
  for (int i = 0; i < scene.cu_channel.size(); ++i) {
    mix(scene.cu_channel(i).real());
    mix(scene.cu_channel(i).imag());
  }
  for (int k = 0; k < static_cast<int>(scene.targets.size()); ++k) {
    const CVector hk = scene.target_channel(k);
    for (int i = 0; i < hk.size(); ++i) {
      mix(hk(i).real());
      mix(hk(i).imag());
    }
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

void emit_error_json(const std::string& kind, const std::string& message, double max_rate) {
  json err;
  err["error"] = kind;
  err["message"] = message;
  if (std::isfinite(max_rate)) err["max_secrecy_rate_bpshz"] = max_rate;
  std::cerr << err.dump() << "\n";
}

namespace {

designs::DesignReport dispatch_design(const ScenarioConfig& cfg, const SampleGrid& grid) {
  if (cfg.design == "optimal")
    return designs::solve_optimal(cfg.scene, grid, cfg.r0, cfg.search, cfg.solver);
  if (cfg.design == "zf") return designs::solve_zf(cfg.scene, grid, cfg.r0, cfg.solver);
  if (cfg.design == "separate")
    return designs::solve_separate(cfg.scene, grid, cfg.r0, cfg.solver, cfg.seed);
  return designs::solve_sensing_only(cfg.scene, grid, cfg.solver);
}

void write_beampattern_csv(const std::string& path, const SampleGrid& grid,
                           const designs::DesignReport& rep, bool normalize) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << "angle_deg,desired,total_gain_db,info_gain_db,sensing_gain_db";
  if (normalize) out << ",total_norm_db,info_norm_db,sensing_norm_db";
  out << "\n";
  const double tmax = rep.total_gain.maxCoeff();
  const double imax = rep.info_gain.maxCoeff();
  const double smax = rep.sensing_gain.maxCoeff();
  for (int m = 0; m < grid.size(); ++m) {
    out << format_number(rad_to_deg(grid.angles_rad(m))) << ','
        << static_cast<int>(grid.desired(m)) << ','
        << format_number(gain_db(rep.total_gain(m))) << ','
        << format_number(gain_db(rep.info_gain(m))) << ','
        << format_number(gain_db(rep.sensing_gain(m)));
    if (normalize) {
      auto norm_db = [](double g, double peak) {
        return peak > 0.0 ? gain_db(g / peak) : -120.0;
      };
      out << ',' << format_number(norm_db(rep.total_gain(m), tmax)) << ','
          << format_number(norm_db(rep.info_gain(m), imax)) << ','
          << format_number(norm_db(rep.sensing_gain(m), smax));
    }
    out << "\n";
  }
}

void write_summary_csv(const std::string& path, const ScenarioConfig& cfg,
                       const designs::DesignReport& rep, double wall_time_s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << "design,matching_error,secrecy_rate_bpshz,cu_sinr_db,max_eve_sinr_db,"
         "gamma_e_star,eta_star,power_info_w,power_sense_w,solver_status,"
         "wall_time_s,channel_hash\n";
  out << rep.design_name << ',' << format_number(rep.matching_error) << ','
      << format_number(rep.secrecy_rate) << ',' << format_number(gain_db(rep.cu_sinr))
      << ',' << format_number(gain_db(rep.max_eve_sinr())) << ',';
  if (std::isfinite(rep.gamma_e_star)) out << format_number(rep.gamma_e_star);
  out << ',' << format_number(rep.eta_star) << ','
      << format_number(rep.design.info_power()) << ','
      << format_number(rep.design.sensing_power()) << ','
      << conic::to_string(rep.diag.status) << ',' << format_number(wall_time_s) << ','
      << channel_hash(cfg.scene) << "\n";
}

}  // namespace

int run_design(const ScenarioConfig& cfg, const std::string& out_dir, bool normalize) {
  const auto start = std::chrono::steady_clock::now();
  try {
    const SampleGrid grid = make_grid(cfg);
    const designs::DesignReport rep = dispatch_design(cfg, grid);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::filesystem::create_directories(out_dir);
    write_beampattern_csv(out_dir + "/beampattern.csv", grid, rep, normalize);
    write_summary_csv(out_dir + "/summary.csv", cfg, rep, wall);
    return 0;
  } catch (const FeasibilityError& e) {
    emit_error_json("infeasible", e.what(), e.max_rate_bpshz);
    return 2;
  } catch (const ConfigError& e) {
    emit_error_json("config", e.what());
    return 1;
  } catch (const std::exception& e) {
    emit_error_json("failure", e.what());
    return 1;
  }
}

int run_sweep(const ScenarioConfig& cfg, const std::string& out_dir) {
  try {
    if (cfg.sweep_r0.empty())
      throw ConfigError("sweep requires a non-empty sweep_r0_bpshz list");
    const SampleGrid grid = make_grid(cfg);
    const designs::DesignReport sensing = designs::solve_sensing_only(cfg.scene, grid,
                                                                      cfg.solver);
    std::filesystem::create_directories(out_dir);
    std::ofstream out(out_dir + "/sweep.csv", std::ios::binary);
    if (!out) throw ConfigError("cannot write sweep.csv");
    out << "r0_bpshz,error_optimal,error_zf,error_separate,error_sensing_only,"
           "feasible_optimal,feasible_zf,feasible_separate\n";
    for (double r0 : cfg.sweep_r0) {
      std::array<std::string, 3> cells{"", "", ""};
      std::array<bool, 3> ok{false, false, false};
      for (int d = 0; d < 3; ++d) {
        try {
          designs::DesignReport rep;
          if (d == 0)
            rep = designs::solve_optimal(cfg.scene, grid, r0, cfg.search, cfg.solver);
          else if (d == 1)
            rep = designs::solve_zf(cfg.scene, grid, r0, cfg.solver);
          else
            rep = designs::solve_separate(cfg.scene, grid, r0, cfg.solver, cfg.seed);
          cells[static_cast<size_t>(d)] = format_number(rep.matching_error);
          ok[static_cast<size_t>(d)] = true;
        } catch (const FeasibilityError&) {
          // row stays empty, flagged infeasible; the sweep continues
        }
      }
      out << format_number(r0) << ',' << cells[0] << ',' << cells[1] << ',' << cells[2]
          << ',' << format_number(sensing.matching_error) << ',' << (ok[0] ? "true" : "false")
          << ',' << (ok[1] ? "true" : "false") << ',' << (ok[2] ? "true" : "false") << "\n";
    }
    return 0;
  } catch (const ConfigError& e) {
    emit_error_json("config", e.what());
    return 1;
  } catch (const std::exception& e) {
    emit_error_json("failure", e.what());
    return 1;
  }
}

int run_verify(const std::string& level) {
  if (level != "fast" && level != "full") {
    emit_error_json("config", "verify level must be 'fast' or 'full'");
    return 1;
  }
  int failures = 0;
  for (int n : {2, 4, 8}) {
    const oracle::FuzzReport rep = oracle::fuzz_proposition1(n, 1000, 42);
    std::printf("extraction fuzz n=%d trials=%d degenerate=%d violations=%zu\n", n,
                rep.trials, rep.degenerate_hits, rep.violations.size());
    for (const auto& v : rep.violations) {
      std::printf("  VIOLATION trial %d: %s (%.3e)\n", v.trial, v.what.c_str(),
                  v.magnitude);
      ++failures;
    }
  }
  for (const std::string& id : oracle::analytic_case_ids()) {
    const oracle::AnalyticCheck chk = oracle::run_analytic_case(id);
    std::printf("analytic %-16s expected=%.9e actual=%.9e %s\n", chk.id.c_str(),
                chk.expected, chk.actual, chk.pass ? "ok" : "MISMATCH");
    if (!chk.pass) ++failures;
  }
  if (level == "full") {
    for (int i : {0, 2}) {
      const oracle::SandwichFixture fx = oracle::sandwich_fixture(i);
      const double max_rate = designs::max_secrecy_rate(fx.scene);
      const double r0 = fx.r0_fraction * max_rate;
      const designs::DesignReport opt =
          designs::solve_optimal(fx.scene, fx.grid, r0);
      oracle::BruteForceConfig bf;
      bf.points_per_dim = 48;
      bf.restrict_real = true;
      for (int p = 0; p <= 16; ++p)
        bf.power_levels.push_back(fx.scene.power_budget_w * p / 16.0);
      const oracle::BruteForceResult brute =
          oracle::brute_force_p1(fx.scene, fx.grid, r0, bf);
      const bool ok = brute.feasible && opt.matching_error <= brute.error * (1 + 1e-9) &&
                      brute.error <= 1.02 * opt.matching_error;
      std::printf("sandwich %-18s design=%.6e exhaustive=%.6e %s\n", fx.name.c_str(),
                  opt.matching_error, brute.error, ok ? "ok" : "VIOLATION");
      if (!ok) ++failures;
    }
  }
  std::printf(failures == 0 ? "verify: all checks passed\n"
                            : "verify: %d check(s) failed\n",
              failures);
  return failures == 0 ? 0 : 3;
}

int run_feasibility(const ScenarioConfig& cfg) {
  try {
    const double rate = designs::max_secrecy_rate(cfg.scene, cfg.search, cfg.solver);
    std::printf("%s\n", format_number(rate).c_str());
    return 0;
  } catch (const std::exception& e) {
    emit_error_json("failure", e.what());
    return 1;
  }
}

}  // namespace isacbeam::cli
