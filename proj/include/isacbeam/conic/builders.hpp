// SPDX-License-Identifier: Apache-2.0
//
// Compilation of the beamforming subproblems into conic form, plus
// solve-and-recover helpers that map solver output back to complex matrices.
// Every quadratic beampattern objective is handled as a norm epigraph
// (min t subject to ||residual|| <= t); matching errors are t^2.

#pragma once

#include "isacbeam/conic/problem.hpp"
#include "isacbeam/conic/solver.hpp"
#include "isacbeam/types.hpp"

namespace isacbeam::conic {

struct CompiledProblem {
  ConicProblem problem;
  int var_w = -1;
  int var_s = -1;
  int sc_eta = -1;
  int sc_t = -1;
  int sc_q0 = -1;
  int sc_xi = -1;
  CMatrix basis;  // subspace basis when the matrix variable is reduced (P7)
};

/// Inner subproblem of the optimal design at a fixed eavesdropper SINR cap:
/// minimize the beampattern matching error over (W, S, eta) subject to the
/// power equality, the per-eavesdropper leakage bounds and the CU SINR bound
/// with beta = 2^r0 (1 + gamma_e) - 1.
CompiledProblem build_sdr41(const Scene& scene, const SampleGrid& grid, double gamma_e,
                            double r0);

/// Zero-forcing design subproblem over (Q0, S, eta) for a fixed unit-norm
/// information direction.
CompiledProblem build_p5(const Scene& scene, const SampleGrid& grid,
                         const CVector& zf_direction, double r0);

/// Sensing-stage subproblem of the separate design for a fixed information
/// beam: the sensing covariance is confined to the CU-orthogonal subspace, so
/// the artificial noise cannot interfere with the CU. The matrix variable is
/// expressed on an orthonormal basis of that subspace; recover the full
/// covariance as basis * S * basis^H.
CompiledProblem build_p7(const Scene& scene, const SampleGrid& grid,
                         const CVector& w0_fixed);

/// AN-free minimum-power secrecy beamforming, relaxed over W = w0 w0^H:
/// min tr(W) s.t. g^H W g / sigma0^2 - 2^r0 h_k^H W h_k / sigma_k^2 >= 2^r0 - 1,
/// tr(W) <= power_cap, W PSD.
CompiledProblem build_p6_sdr(const Scene& scene, double r0, double power_cap);

/// Sensing-only benchmark: matching-error minimization over S alone with
/// tr(S) = Q.
CompiledProblem build_sensing_only(const Scene& scene, const SampleGrid& grid);

/// Best CU SINR subject to every eavesdropper SINR <= gamma_e and the power
/// equality, linearized by the Charnes-Cooper substitution (W', S', xi).
/// The achieved SINR is the negated objective value.
CompiledProblem build_rate_subproblem(const Scene& scene, double gamma_e);

// ---- solve-and-recover -----------------------------------------------------

struct QsdpSolution {
  CMatrix w, s;
  double eta = 0.0, t = 0.0;
  SolverResult result;
  double block_deviation = 0.0;  // worst PSD-slack deviation from a complex embedding
  bool optimal() const { return result.status == SolveStatus::optimal; }
};

struct P5Solution {
  CMatrix s;
  double q0 = 0.0, eta = 0.0, t = 0.0;
  SolverResult result;
  double block_deviation = 0.0;
  bool optimal() const { return result.status == SolveStatus::optimal; }
};

struct P6Solution {
  CMatrix w;
  double power = 0.0;
  SolverResult result;
  double block_deviation = 0.0;
  bool optimal() const { return result.status == SolveStatus::optimal; }
};

struct RateSolution {
  double best_sinr = 0.0;  // beta*
  SolverResult result;
  bool optimal() const { return result.status == SolveStatus::optimal; }
};

QsdpSolution solve_sdr41(const Scene& scene, const SampleGrid& grid, double gamma_e,
                         double r0, const SolverSettings& settings);
P5Solution solve_p5(const Scene& scene, const SampleGrid& grid, const CVector& zf_direction,
                    double r0, const SolverSettings& settings);
QsdpSolution solve_p7(const Scene& scene, const SampleGrid& grid, const CVector& w0_fixed,
                      const SolverSettings& settings);
P6Solution solve_p6_sdr(const Scene& scene, double r0, double power_cap,
                        const SolverSettings& settings);
QsdpSolution solve_sensing_only_qsdp(const Scene& scene, const SampleGrid& grid,
                                     const SolverSettings& settings);
RateSolution solve_rate_subproblem(const Scene& scene, double gamma_e,
                                   const SolverSettings& settings);

/// Worst relative violation of the original SDR4.1 constraints, re-evaluated
/// in complex arithmetic on recovered matrices.
double sdr41_replay_violation(const Scene& scene, double gamma_e, double r0,
                              const CMatrix& w, const CMatrix& s);

}  // namespace isacbeam::conic
