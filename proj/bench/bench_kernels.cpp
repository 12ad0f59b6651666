// SPDX-License-Identifier: Apache-2.0
//
// Serial vs OpenMP timing for the parallel kernels: exhaustive candidate
// enumeration, the outer gamma search, and batched matching-error evaluation.
// Results double-check that both paths agree bit-for-bit.

#include "isacbeam/designs.hpp"
#include "isacbeam/model.hpp"
#include "isacbeam/oracle.hpp"
#include "isacbeam/parallel.hpp"
#include "isacbeam/rng.hpp"

#include <chrono>
#include <cstdio>

using namespace isacbeam;

namespace {

template <class F>
double time_s(F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, double serial, double openmp, bool identical) {
  std::printf("%-28s %10.3fs %10.3fs %8.2fx   %s\n", name, serial, openmp,
              serial / openmp, identical ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("threads: %d\n", max_threads());
  std::printf("%-28s %11s %11s %9s\n", "kernel", "serial", "openmp", "speedup");

  {
    const oracle::SandwichFixture fx = oracle::sandwich_fixture(0);
    oracle::BruteForceConfig cfg;
    cfg.points_per_dim = 56;
    cfg.restrict_real = true;
    for (int p = 0; p <= 16; ++p)
      cfg.power_levels.push_back(fx.scene.power_budget_w * p / 16.0);
    oracle::BruteForceResult rs, rp;
    const double ts =
        time_s([&] { rs = oracle::brute_force_p1(fx.scene, fx.grid, 0.2, cfg, ExecPolicy::serial); });
    const double tp =
        time_s([&] { rp = oracle::brute_force_p1(fx.scene, fx.grid, 0.2, cfg, ExecPolicy::openmp); });
    row("candidate enumeration", ts, tp, rs.error == rp.error);
  }

  {
    const Scene scene = [] {
      Scene s;
      s.n_antennas = 8;
      s.antenna_spacing_ratio = 0.5;
      s.power_budget_w = 0.1;
      s.cu_noise_power_w = 1e-9;
      for (double a : {-10., 10., -30., 30., 60.}) {
        Target t;
        t.angle_rad = deg_to_rad(a);
        t.reference_pathloss = 1e-7;
        if (std::abs(a) == 30.0) {
          t.is_eavesdropper = true;
          t.noise_power_w = 1e-9;
        }
        s.targets.push_back(t);
      }
      Target cu;
      cu.angle_rad = 0.0;
      cu.reference_pathloss = 1e-7;
      s.cu_channel = model::los_channel(cu, 8, 0.5);
      return s;
    }();
    double rs = 0.0, rp = 0.0;
    const double ts = time_s([&] { rs = designs::max_secrecy_rate(scene, {}, {}, ExecPolicy::serial); });
    const double tp = time_s([&] { rp = designs::max_secrecy_rate(scene, {}, {}, ExecPolicy::openmp); });
    row("outer gamma search", ts, tp, rs == rp);
  }

  {
    // batched matching-error evaluation over many candidate covariances
    const oracle::SandwichFixture fx = oracle::sandwich_fixture(2);
    const SampleGrid grid = model::desired_beampattern(fx.scene, deg_to_rad(2.0), 721);
    const int n_cand = 4000;
    std::vector<CMatrix> covs;
    Rng rng(99);
    for (int i = 0; i < n_cand; ++i) {
      CMatrix x(2, 2);
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) x(r, c) = Complex(rng.gaussian(), rng.gaussian());
      covs.push_back(x * x.adjoint());
    }
    std::vector<double> out_s(n_cand), out_p(n_cand);
    auto run = [&](ExecPolicy pol, std::vector<double>& out) {
      parallel_for_static(n_cand, pol, [&](std::int64_t i) {
        const double eta = model::optimal_scale(covs[(size_t)i], grid, fx.scene);
        BeamDesign d;
        d.info_beam = CVector::Zero(2);
        d.sensing_cov = covs[(size_t)i];
        d.scale = eta;
        out[(size_t)i] = model::matching_error(d, grid, fx.scene);
      });
    };
    const double ts = time_s([&] { run(ExecPolicy::serial, out_s); });
    const double tp = time_s([&] { run(ExecPolicy::openmp, out_p); });
    row("matching-error batch", ts, tp, out_s == out_p);
  }
  return 0;
}
