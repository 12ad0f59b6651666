// SPDX-License-Identifier: Apache-2.0
//
// Primal-dual interior-point solver for the standard conic form, using the
// homogeneous self-dual embedding with Nesterov-Todd scaling and Mehrotra
// correction. Handles orthant, second-order and PSD cones; problem data is
// Ruiz-equilibrated before the iteration. Deterministic: identical inputs and
// settings produce identical results.

#pragma once

#include "isacbeam/conic/standard_form.hpp"

#include <string>

namespace isacbeam::conic {

enum class SolveStatus { optimal, infeasible, max_iterations, numerical_failure };

std::string to_string(SolveStatus status);

struct SolverSettings {
  double tol_feas = 1e-8;
  double tol_gap = 1e-8;
  int max_iters = 200;
  int refine_steps = 2;     // iterative refinement rounds per KKT solve
  bool equilibrate = true;
};

struct SolverResult {
  SolveStatus status = SolveStatus::numerical_failure;
  RVector x;
  RVector y;
  RVector z;
  RVector s;
  double objective = 0.0;      // c'x of the returned primal point
  double gap = 0.0;            // s'z
  double rel_gap = 0.0;
  double primal_resid = 0.0;
  double dual_resid = 0.0;
  int iterations = 0;
  std::string message;
};

SolverResult solve(const StandardForm& sf, const SolverSettings& settings = {});

}  // namespace isacbeam::conic
