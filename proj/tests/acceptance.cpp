// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line with
// the measured quantities; the process exits nonzero if any criterion fails.

#include "isacbeam/designs.hpp"
#include "isacbeam/model.hpp"
#include "isacbeam/oracle.hpp"
#include "isacbeam/rng.hpp"
#include "isacbeam/scenario.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

using namespace isacbeam;

namespace {

int g_failures = 0;

void report(int index, bool pass, const std::string& what, double seconds) {
  std::printf("%s  criterion %d: %s  [%.1fs]\n", pass ? "PASS" : "FAIL", index,
              what.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Scene paper_scene(double cu_deg) {
  Scene s;
  s.n_antennas = 8;
  s.antenna_spacing_ratio = 0.5;
  s.power_budget_w = dbm_to_watts(20.0);
  s.cu_noise_power_w = dbm_to_watts(-60.0);
  for (double a : {-10., 10., -30., 30., 80., -80., -50., 50.}) {
    Target t;
    t.angle_rad = deg_to_rad(a);
    t.reference_pathloss = loss_db_to_linear(70.0);
    if (std::abs(a) == 30.0) {
      t.is_eavesdropper = true;
      t.noise_power_w = dbm_to_watts(-60.0);
    }
    s.targets.push_back(t);
  }
  Target cu;
  cu.angle_rad = deg_to_rad(cu_deg);
  cu.reference_pathloss = loss_db_to_linear(70.0);
  s.cu_channel = model::los_channel(cu, 8, 0.5);
  return s;
}

cli::ScenarioConfig paper_config(double cu_deg) {
  cli::ScenarioConfig cfg;
  cfg.scene = paper_scene(cu_deg);
  cfg.beam_width_rad = deg_to_rad(5.0);
  cfg.n_samples = 201;
  return cfg;
}

// a seeded random scene: 4-8 antennas, separated target angles, 1-2 eavesdroppers
Scene random_scene(std::uint64_t seed) {
  Rng rng = Rng::stream(0x5ce9a510, seed);
  Scene s;
  s.n_antennas = 4 + static_cast<int>(rng.next_u64() % 5);
  s.antenna_spacing_ratio = 0.5;
  s.power_budget_w = dbm_to_watts(20.0);
  s.cu_noise_power_w = dbm_to_watts(-60.0);
  const int n_targets = 3 + static_cast<int>(rng.next_u64() % 3);
  std::vector<double> angles;
  while (static_cast<int>(angles.size()) < n_targets) {
    const double cand = rng.uniform(-80.0, 80.0);
    bool ok = true;
    for (double a : angles) {
      if (std::abs(a - cand) < 14.0) ok = false;
    }
    if (ok) angles.push_back(cand);
  }
  const int n_eves = 1 + static_cast<int>(rng.next_u64() % 2);
  for (int k = 0; k < n_targets; ++k) {
    Target t;
    t.angle_rad = deg_to_rad(angles[static_cast<size_t>(k)]);
    t.reference_pathloss = loss_db_to_linear(70.0);
    if (k < n_eves) {
      t.is_eavesdropper = true;
      t.noise_power_w = dbm_to_watts(-60.0);
    }
    s.targets.push_back(t);
  }
  Target cu;
  cu.angle_rad = deg_to_rad(rng.uniform(-70.0, 70.0));
  cu.reference_pathloss = loss_db_to_linear(70.0);
  s.cu_channel = model::los_channel(cu, s.n_antennas, 0.5);
  return s;
}

void criterion1_extraction_properties() {
  Timer timer;
  bool pass = true;
  std::ostringstream what;
  what << "rank-one extraction properties over seeded draws;";
  for (int n : {2, 4, 8}) {
    const oracle::FuzzReport rep = oracle::fuzz_proposition1(n, 1000, 42);
    pass = pass && rep.passed();
    what << " n=" << n << " violations=" << rep.violations.size();
  }
  report(1, pass, what.str(), timer.seconds());
}

void criterion2_tightness_in_situ() {
  Timer timer;
  bool pass = true;
  double worst_gap = 0.0, worst_rate_deficit = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Scene scene = random_scene(static_cast<std::uint64_t>(100 + i));
    const SampleGrid grid = model::desired_beampattern(scene, deg_to_rad(6.0), 101);
    Rng rng = Rng::stream(0x7157, static_cast<std::uint64_t>(i));
    const double max_rate = designs::max_secrecy_rate(scene);
    const double r0 = rng.uniform(0.3, 0.7) * max_rate;
    const designs::DesignReport rep = designs::solve_optimal(scene, grid, r0);
    const double relaxed = rep.trace->value_star;
    const double gap = std::abs(rep.matching_error - relaxed) /
                       std::max({relaxed, rep.matching_error, 1e-12});
    worst_gap = std::max(worst_gap, gap);
    worst_rate_deficit = std::max(worst_rate_deficit, r0 - rep.secrecy_rate);
    if (gap > 1e-6 || rep.secrecy_rate < r0 - 1e-6) pass = false;
  }
  std::ostringstream what;
  what << "relaxation tightness on 20 scenarios; worst objective gap " << worst_gap
       << ", worst rate deficit " << worst_rate_deficit;
  report(2, pass, what.str(), timer.seconds());
}

void criterion3_exhaustive_sandwich() {
  Timer timer;
  bool pass = true;
  std::ostringstream what;
  what << "exhaustive-search sandwich on " << oracle::n_sandwich_fixtures()
       << " two-antenna fixtures;";
  for (int i = 0; i < oracle::n_sandwich_fixtures(); ++i) {
    const oracle::SandwichFixture fx = oracle::sandwich_fixture(i);
    const double max_rate = designs::max_secrecy_rate(fx.scene);
    const double r0 = fx.r0_fraction * max_rate;
    const designs::DesignReport opt = designs::solve_optimal(fx.scene, fx.grid, r0);
    oracle::BruteForceConfig cfg;
    cfg.points_per_dim = 64;
    cfg.restrict_real = true;
    for (int p = 0; p <= 16; ++p)
      cfg.power_levels.push_back(fx.scene.power_budget_w * p / 16.0);
    const oracle::BruteForceResult brute = oracle::brute_force_p1(fx.scene, fx.grid, r0, cfg);
    const bool ok = brute.feasible && opt.matching_error <= brute.error * (1 + 1e-9) &&
                    brute.error <= 1.02 * opt.matching_error;
    what << " " << fx.name << " ratio=" << (brute.error / opt.matching_error);
    pass = pass && ok;
  }
  report(3, pass, what.str(), timer.seconds());
}

void criterion4_beampattern_features() {
  Timer timer;
  const Scene scene = paper_scene(0.0);
  const SampleGrid grid = model::desired_beampattern(scene, deg_to_rad(5.0), 201);
  const designs::DesignReport opt = designs::solve_optimal(scene, grid, 3.0);
  const designs::DesignReport bench = designs::solve_sensing_only(scene, grid);

  const CMatrix info_cov = opt.design.info_beam * opt.design.info_beam.adjoint();
  const double info_peak = opt.info_gain.maxCoeff();
  const double info_at_30 =
      std::max(model::beampattern_gain(info_cov, deg_to_rad(30.0), scene),
               model::beampattern_gain(info_cov, deg_to_rad(-30.0), scene));
  const double info_suppression_db = 10.0 * std::log10(info_peak / info_at_30);

  const double sens_peak = opt.sensing_gain.maxCoeff();
  const double sens_at_0 =
      model::beampattern_gain(opt.design.sensing_cov, 0.0, scene);
  const double sens_suppression_db =
      10.0 * std::log10(sens_peak / std::max(sens_at_0, 1e-300));

  const double bench_gap =
      std::abs(opt.matching_error - bench.matching_error) / bench.matching_error;

  const bool pass =
      info_suppression_db >= 25.0 && sens_suppression_db >= 40.0 && bench_gap <= 0.10;
  std::ostringstream what;
  what << "beampattern features at broadside CU, r0=3: info suppression "
       << info_suppression_db << " dB (need >= 25), sensing null depth "
       << sens_suppression_db << " dB (need >= 40), benchmark gap " << 100 * bench_gap
       << "% (need <= 10%)";
  report(4, pass, what.str(), timer.seconds());
}

struct SweepRow {
  double r0 = 0.0;
  double opt = -1.0, zf = -1.0, sep = -1.0, bench = -1.0;
  bool ok_opt = false, ok_zf = false, ok_sep = false;
};

std::vector<SweepRow> parse_sweep(const std::string& path) {
  std::ifstream in(path);
  std::vector<SweepRow> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string cell;
    SweepRow row;
    auto next = [&]() {
      std::getline(ss, cell, ',');
      return cell;
    };
    row.r0 = std::stod(next());
    const std::string o = next(), z = next(), p = next(), b = next();
    if (!o.empty()) row.opt = std::stod(o);
    if (!z.empty()) row.zf = std::stod(z);
    if (!p.empty()) row.sep = std::stod(p);
    row.bench = std::stod(b);
    row.ok_opt = next() == "true";
    row.ok_zf = next() == "true";
    row.ok_sep = next() == "true";
    rows.push_back(row);
  }
  return rows;
}

std::string g_sweep_dir_a, g_sweep_dir_b;

void criterion5_sweep_trends(const std::filesystem::path& tmp) {
  Timer timer;
  cli::ScenarioConfig cfg = paper_config(60.0);
  for (int i = 0; i < 7; ++i) cfg.sweep_r0.push_back(0.5 + 0.5 * i);
  g_sweep_dir_a = (tmp / "sweep_a").string();
  g_sweep_dir_b = (tmp / "sweep_b").string();
  bool pass = cli::run_sweep(cfg, g_sweep_dir_a) == 0;
  std::ostringstream what;
  what << "sweep trends at 60-degree CU:";
  if (pass) {
    const std::vector<SweepRow> rows = parse_sweep(g_sweep_dir_a + "/sweep.csv");
    pass = rows.size() == 7;
    double prev = -1.0;
    bool monotone = true, dominated = true;
    for (const SweepRow& row : rows) {
      if (!(row.ok_opt && row.ok_zf && row.ok_sep)) pass = false;
      if (row.opt < prev - 1e-6 * (1 + row.opt)) monotone = false;
      prev = row.opt;
      const double eps = 1e-4 * row.opt + 1e-7;
      if (row.zf < row.opt - eps || row.sep < row.opt - eps) dominated = false;
    }
    const SweepRow& low = rows.front();
    const double gap_opt = (low.opt - low.bench) / low.bench;
    const double gap_zf = (low.zf - low.bench) / low.bench;
    const double gap_sep = (low.sep - low.bench) / low.bench;
    const bool approach =
        gap_opt <= 0.05 && gap_zf <= 0.05 && gap_sep <= 0.05;
    what << " monotone=" << (monotone ? "yes" : "NO")
         << " suboptimal-dominated=" << (dominated ? "yes" : "NO")
         << " gaps at r0=0.5: opt " << 100 * gap_opt << "%, zf " << 100 * gap_zf
         << "%, separate " << 100 * gap_sep << "% (need <= 5%)";
    pass = pass && monotone && dominated && approach;
  } else {
    what << " sweep run failed";
  }
  report(5, pass, what.str(), timer.seconds());
}

void criterion6_suboptimal_beampatterns() {
  Timer timer;
  const Scene scene = paper_scene(60.0);
  const SampleGrid grid = model::desired_beampattern(scene, deg_to_rad(5.0), 201);
  const double r0 = 3.5;
  const designs::DesignReport opt = designs::solve_optimal(scene, grid, r0);
  const designs::DesignReport zf = designs::solve_zf(scene, grid, r0);
  const designs::DesignReport sep = designs::solve_separate(scene, grid, r0);

  auto normalized_db = [&](const RVector& gains, int m) {
    return 10.0 * std::log10(std::max(gains(m), 1e-300) / gains.maxCoeff());
  };
  int n_desired = 0, close_zf = 0, close_sep = 0;
  for (int m = 0; m < grid.size(); ++m) {
    if (grid.desired(m) < 0.5) continue;
    ++n_desired;
    const double ref = normalized_db(opt.total_gain, m);
    if (std::abs(normalized_db(zf.total_gain, m) - ref) < 3.0) ++close_zf;
    if (std::abs(normalized_db(sep.total_gain, m) - ref) < 3.0) ++close_sep;
  }
  const double frac_zf = double(close_zf) / n_desired;
  const double frac_sep = double(close_sep) / n_desired;
  const bool pass = frac_zf >= 0.8 && frac_sep >= 0.8;
  std::ostringstream what;
  what << "suboptimal beampatterns within 3 dB of the optimal on the desired region: zf "
       << 100 * frac_zf << "%, separate " << 100 * frac_sep << "% (need >= 80%)";
  report(6, pass, what.str(), timer.seconds());
}

void criterion7_feasibility_coherence(const std::filesystem::path& tmp) {
  Timer timer;
  bool pass = true;
  std::ostringstream what;
  what << "feasibility coherence on 10 scenarios;";
  for (int i = 0; i < 10; ++i) {
    cli::ScenarioConfig cfg;
    cfg.scene = random_scene(static_cast<std::uint64_t>(900 + i));
    cfg.beam_width_rad = deg_to_rad(6.0);
    cfg.n_samples = 101;
    cfg.design = "optimal";
    const double max_rate = designs::max_secrecy_rate(cfg.scene);
    const bool expect_ok = i % 2 == 0;
    cfg.r0 = (expect_ok ? 0.7 : 1.3) * max_rate;
    const int code = cli::run_design(cfg, (tmp / ("feas" + std::to_string(i))).string(),
                                     false);
    const int expected = (cfg.r0 <= max_rate + 1e-4) ? 0 : 2;
    if (code != expected) {
      pass = false;
      what << " scenario " << i << " exit " << code << " (expected " << expected << ")";
    }
  }
  report(7, pass, what.str(), timer.seconds());
}

void criterion8_determinism() {
  Timer timer;
  cli::ScenarioConfig cfg = paper_config(60.0);
  for (int i = 0; i < 7; ++i) cfg.sweep_r0.push_back(0.5 + 0.5 * i);
  bool pass = cli::run_sweep(cfg, g_sweep_dir_b) == 0;
  if (pass) {
    auto slurp = [](const std::string& p) {
      std::ifstream in(p, std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    const std::string a = slurp(g_sweep_dir_a + "/sweep.csv");
    const std::string b = slurp(g_sweep_dir_b + "/sweep.csv");
    pass = !a.empty() && a == b;
  }
  report(8, pass, "repeated sweep produces byte-identical CSV output", timer.seconds());
}

}  // namespace

int main() {
  const std::filesystem::path tmp =
      std::filesystem::temp_directory_path() / "isacbeam_acceptance";
  std::filesystem::create_directories(tmp);

  criterion1_extraction_properties();
  criterion2_tightness_in_situ();
  criterion3_exhaustive_sandwich();
  criterion4_beampattern_features();
  criterion5_sweep_trends(tmp);
  criterion6_suboptimal_beampatterns();
  criterion7_feasibility_coherence(tmp);
  criterion8_determinism();

  std::filesystem::remove_all(tmp);
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
