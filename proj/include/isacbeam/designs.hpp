// SPDX-License-Identifier: Apache-2.0
//
// The beamforming designs: globally optimal (relaxation + 1D search over the
// eavesdropper SINR cap + rank-one extraction), zero-forcing, separate
// information/sensing, the sensing-only benchmark, and the maximum secrecy
// rate used for feasibility checks.

#pragma once

#include "isacbeam/conic/builders.hpp"
#include "isacbeam/parallel.hpp"
#include "isacbeam/types.hpp"

#include <cstdint>
#include <limits>
#include <optional>

namespace isacbeam::designs {

struct SearchParams {
  int n_grid = 64;        // first-round logarithmic grid points
  int n_refine = 3;       // linear refinement rounds around the incumbent
  int refine_points = 16;
  double gamma_lo = 1e-6;
};

struct OuterPoint {
  double gamma_e = 0.0;
  double value = 0.0;  // +inf when infeasible
  bool feasible = false;
};

struct OuterSearchTrace {
  std::vector<OuterPoint> points;  // evaluation order: round by round, grid order
  double gamma_star = 0.0;
  double value_star = std::numeric_limits<double>::infinity();
  double refined_lo = 0.0;
  double refined_hi = 0.0;
};

struct SolverDiag {
  conic::SolveStatus status = conic::SolveStatus::numerical_failure;
  int iterations = 0;
  double gap = 0.0;
  double primal_resid = 0.0;
  double dual_resid = 0.0;
  double block_deviation = 0.0;
  bool block_repair_warning = false;
  bool randomization_used = false;
};

struct DesignReport {
  std::string design_name;
  BeamDesign design;
  double matching_error = 0.0;
  double secrecy_rate = 0.0;            // recomputed from the design
  double cu_sinr = 0.0;
  std::vector<double> eve_sinrs;        // per eavesdropper, scene order
  RVector total_gain, info_gain, sensing_gain;  // per grid sample
  double eta_star = 0.0;
  double gamma_e_star = std::numeric_limits<double>::quiet_NaN();
  SolverDiag diag;
  std::optional<OuterSearchTrace> trace;

  double max_eve_sinr() const {
    double v = 0.0;
    for (double s : eve_sinrs) v = std::max(v, s);
    return v;
  }
};

struct ExtractOptions {
  double eps_psd_rel = 1e-6;    // allowed input PSD violation relative to trace
  double eps_null_rel = 1e-12;  // degenerate threshold on g^H W g
};

/// Closed-form rank-one extraction: from a relaxed (W~, S~, eta~) builds
///   w0 = W~ g / sqrt(g^H W~ g),  W = w0 w0^H,  S = W~ + S~ - W,
/// preserving the summed covariance exactly, the CU quadratic form, and never
/// increasing any other quadratic form of W (Cauchy-Schwarz). All four
/// properties are verified at runtime; violations throw NumericalError.
/// Throws DegenerateExtraction when g^H W~ g is (numerically) zero.
BeamDesign rank_one_extract(const CMatrix& w_tilde, const CMatrix& s_tilde,
                            double eta_tilde, const CVector& g,
                            const ExtractOptions& opts = {});

/// Maximum achievable secrecy rate under the power budget (always >= 0).
double max_secrecy_rate(const Scene& scene, const SearchParams& search = {},
                        const conic::SolverSettings& settings = {},
                        ExecPolicy policy = default_policy(),
                        OuterSearchTrace* trace_out = nullptr);

/// Globally optimal design. Throws FeasibilityError (carrying the maximum
/// rate) when r0 is not achievable.
DesignReport solve_optimal(const Scene& scene, const SampleGrid& grid, double r0,
                           const SearchParams& search = {},
                           const conic::SolverSettings& settings = {},
                           ExecPolicy policy = default_policy());

/// Zero-forcing design: the information beam is confined to the nullspace of
/// all eavesdropper channels. Requires n_antennas > K_E.
DesignReport solve_zf(const Scene& scene, const SampleGrid& grid, double r0,
                      const conic::SolverSettings& settings = {});

/// Separate design: minimum-power AN-free secrecy beam first, remaining power
/// to a sensing covariance in the CU-orthogonal subspace.
DesignReport solve_separate(const Scene& scene, const SampleGrid& grid, double r0,
                            const conic::SolverSettings& settings = {},
                            std::uint64_t seed = 1);

/// Sensing-only benchmark (no information signal, full power to sensing);
/// lower-bounds the matching error of every design.
DesignReport solve_sensing_only(const Scene& scene, const SampleGrid& grid,
                                const conic::SolverSettings& settings = {});

}  // namespace isacbeam::designs
