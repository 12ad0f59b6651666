// SPDX-License-Identifier: Apache-2.0
//
// Independent verifiers: an exhaustive small-instance search for the joint
// design problem, randomized checking of the rank-one extraction properties,
// and closed-form fixtures. Everything here recomputes its quantities from
// first principles instead of reusing the main solve path.

#pragma once

#include "isacbeam/conic/solver.hpp"
#include "isacbeam/parallel.hpp"
#include "isacbeam/types.hpp"

#include <cstdint>
#include <limits>

namespace isacbeam::oracle {

struct BruteForceConfig {
  int points_per_dim = 24;
  std::vector<double> power_levels;  // info-beam powers in watts; empty = 9 even steps
  bool restrict_real = false;        // search real beams/covariances only
  double rate_slack = 1e-6;          // candidates may miss r0 by this much
  std::int64_t max_candidates = 10'000'000;
};

struct BruteForceResult {
  BeamDesign design;
  double error = std::numeric_limits<double>::infinity();
  bool feasible = false;
  std::int64_t n_candidates = 0;
  double rate_slack = 0.0;
};

/// Exhaustive search over discretized (w0, S, power split) with the scale
/// chosen optimally per candidate. Supports n_antennas == 2 (complex or real)
/// and n_antennas == 3 (real only). Throws std::invalid_argument when the
/// candidate count would exceed cfg.max_candidates.
BruteForceResult brute_force_p1(const Scene& scene, const SampleGrid& grid, double r0,
                                const BruteForceConfig& cfg,
                                ExecPolicy policy = default_policy());

struct FuzzViolation {
  int trial = 0;
  std::string what;
  double magnitude = 0.0;
};

struct FuzzReport {
  int n_antennas = 0;
  int trials = 0;
  int degenerate_hits = 0;  // draws exercising the zero-CU-power path
  std::vector<FuzzViolation> violations;
  // worst margins across trials (independent of the pass thresholds)
  double worst_sum_dev = 0.0;
  double worst_w_min_eig = 0.0;   // most negative min-eig of W~ - W*, trace-normalized
  double worst_s_min_eig = 0.0;
  double worst_cu_rel_dev = 0.0;
  double worst_eve_excess = 0.0;
  bool passed() const { return violations.empty(); }
};

/// Randomized check of the four extraction properties on seeded draws of
/// (W~, S~, g); identical seeds give identical reports.
FuzzReport fuzz_proposition1(int n_antennas, int n_trials, std::uint64_t seed);

struct AnalyticCheck {
  std::string id;
  std::string description;
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

std::vector<std::string> analytic_case_ids();

/// Runs one closed-form fixture against the implementation.
///  - orthogonal_zf:  CU channel orthogonal to the sole eavesdropper; the
///    maximum secrecy rate is log2(1 + Q |g|^2 / sigma0^2) (full power to the
///    CU leaks nothing).
///  - p6_orthogonal:  same geometry; the minimum AN-free transmit power is
///    sigma0^2 (2^r0 - 1) / |g|^2 (single active constraint, beam along g).
///  - projector_null: the CU-orthogonal projector annihilates g, so the
///    projected covariance puts exactly zero power on the CU.
AnalyticCheck run_analytic_case(const std::string& id,
                                const conic::SolverSettings& settings = {});

/// Two-antenna scenes whose optimum is attained by real-valued beams and
/// covariances (real channels, angle layout symmetric about broadside), so a
/// real-restricted exhaustive search brackets the relaxation-based design.
struct SandwichFixture {
  std::string name;
  Scene scene;
  SampleGrid grid;
  double r0_fraction = 0.5;  // requirement as a fraction of the maximum rate
};

int n_sandwich_fixtures();
SandwichFixture sandwich_fixture(int index);

}  // namespace isacbeam::oracle
