// SPDX-License-Identifier: Apache-2.0

#include "isacbeam/conic/builders.hpp"

#include "isacbeam/conic/embedding.hpp"
#include "isacbeam/model.hpp"

#include <cmath>

namespace isacbeam::conic {

namespace {

double quad(const CVector& a, const CMatrix& x) {
  return std::real(Complex(a.adjoint() * x * a));
}

std::vector<CVector> grid_steering(const Scene& scene, const SampleGrid& grid) {
  std::vector<CVector> a;
  a.reserve(static_cast<size_t>(grid.size()));
  for (int m = 0; m < grid.size(); ++m) {
    a.push_back(model::steering_vector(grid.angles_rad(m), scene.n_antennas,
                                       scene.antenna_spacing_ratio));
  }
  return a;
}

// residual rows eta*desired_m - a_m^H(cov) a_m bound by the epigraph scalar t;
// extra covariance terms are appended by the caller before this is invoked
void add_matching_epigraph(CompiledProblem& cp, const Scene& scene, const SampleGrid& grid,
                           const std::vector<std::pair<int, double>>& matrix_terms,
                           const std::vector<std::pair<int, RVector>>& scalar_terms,
                           const RVector& constants) {
  const auto steer = grid_steering(scene, grid);
  for (int m = 0; m < grid.size(); ++m) {
    RVector row = cp.problem.zero_expr();
    cp.problem.accum_scalar(row, cp.sc_eta, grid.desired(m));
    for (const auto& [var, mult] : matrix_terms) {
      cp.problem.accum_quad_form(row, var, steer[static_cast<size_t>(m)], mult);
    }
    for (const auto& [svar, coeffs] : scalar_terms) {
      cp.problem.accum_scalar(row, svar, coeffs(m));
    }
    cp.problem.add_soc_row(row, constants.size() ? constants(m) : 0.0);
  }
  cp.problem.set_soc_bound(cp.sc_t);
  cp.problem.set_objective_scalar(cp.sc_t);
}

double psd_slack_deviation(const ConicProblem& problem, int var, const SolverResult& res) {
  const int dim = 2 * problem.matrix_dim(var);
  const RVector seg = res.s.segment(problem.psd_slack_offset(var), dim * (dim + 1) / 2);
  double dev = 0.0;
  extract_hermitian(svec_to_matrix(seg, dim), &dev, /*eps_blk=*/1.0);
  return dev;
}

}  // namespace

CompiledProblem build_sdr41(const Scene& scene, const SampleGrid& grid, double gamma_e,
                            double r0) {
  if (gamma_e <= 0.0) throw std::invalid_argument("build_sdr41: gamma_e must be positive");
  CompiledProblem cp;
  const int n = scene.n_antennas;
  cp.var_w = cp.problem.add_hermitian(n, "W");
  cp.var_s = cp.problem.add_hermitian(n, "S");
  cp.sc_eta = cp.problem.add_scalar("eta");
  cp.sc_t = cp.problem.add_scalar("t");

  RVector power = cp.problem.zero_expr();
  cp.problem.accum_trace(power, cp.var_w);
  cp.problem.accum_trace(power, cp.var_s);
  cp.problem.add_equality(power, scene.power_budget_w);

  for (int k : scene.eavesdroppers()) {
    const CVector h = scene.target_channel(k);
    RVector row = cp.problem.zero_expr();
    cp.problem.accum_quad_form(row, cp.var_w, h, 1.0);
    cp.problem.accum_quad_form(row, cp.var_s, h, -gamma_e);
    cp.problem.add_inequality(row, gamma_e * scene.targets[static_cast<size_t>(k)].noise_power_w);
  }

  const double beta = std::pow(2.0, r0) * (1.0 + gamma_e) - 1.0;
  RVector cu = cp.problem.zero_expr();
  cp.problem.accum_quad_form(cu, cp.var_s, scene.cu_channel, beta);
  cp.problem.accum_quad_form(cu, cp.var_w, scene.cu_channel, -1.0);
  cp.problem.add_inequality(cu, -beta * scene.cu_noise_power_w);

  add_matching_epigraph(cp, scene, grid, {{cp.var_w, -1.0}, {cp.var_s, -1.0}}, {},
                        RVector());
  return cp;
}

CompiledProblem build_p5(const Scene& scene, const SampleGrid& grid,
                         const CVector& zf_direction, double r0) {
  CompiledProblem cp;
  const int n = scene.n_antennas;
  cp.var_s = cp.problem.add_hermitian(n, "S");
  cp.sc_q0 = cp.problem.add_scalar("Q0", /*nonneg=*/true);
  cp.sc_eta = cp.problem.add_scalar("eta");
  cp.sc_t = cp.problem.add_scalar("t");

  RVector power = cp.problem.zero_expr();
  cp.problem.accum_trace(power, cp.var_s);
  cp.problem.accum_scalar(power, cp.sc_q0, 1.0);
  cp.problem.add_equality(power, scene.power_budget_w);

  // (2^r0 - 1)(sigma0^2 + g^H S g) <= Q0 |g^H w0_dir|^2
  const double rate_gain = std::pow(2.0, r0) - 1.0;
  const double dir_gain = std::norm(Complex(scene.cu_channel.adjoint() * zf_direction));
  RVector sec = cp.problem.zero_expr();
  cp.problem.accum_quad_form(sec, cp.var_s, scene.cu_channel, rate_gain);
  cp.problem.accum_scalar(sec, cp.sc_q0, -dir_gain);
  cp.problem.add_inequality(sec, -rate_gain * scene.cu_noise_power_w);

  const auto steer = grid_steering(scene, grid);
  RVector dir_pattern(grid.size());
  for (int m = 0; m < grid.size(); ++m) {
    dir_pattern(m) = -std::norm(Complex(steer[static_cast<size_t>(m)].adjoint() * zf_direction));
  }
  add_matching_epigraph(cp, scene, grid, {{cp.var_s, -1.0}}, {{cp.sc_q0, dir_pattern}},
                        RVector());
  return cp;
}

CompiledProblem build_p7(const Scene& scene, const SampleGrid& grid,
                         const CVector& w0_fixed) {
  const double info_power = w0_fixed.squaredNorm();
  if (info_power > scene.power_budget_w * (1.0 + 1e-9))
    throw std::invalid_argument("build_p7: fixed beam exceeds the power budget");
  CompiledProblem cp;
  const int n = scene.n_antennas;

  // orthonormal basis of the CU-orthogonal subspace
  Eigen::HouseholderQR<CMatrix> qr(scene.cu_channel);
  const CMatrix full = qr.householderQ() * CMatrix::Identity(n, n);
  cp.basis = full.rightCols(n - 1);

  cp.var_s = cp.problem.add_hermitian(n - 1, "S_perp");
  cp.sc_eta = cp.problem.add_scalar("eta");
  cp.sc_t = cp.problem.add_scalar("t");

  RVector power = cp.problem.zero_expr();
  cp.problem.accum_trace(power, cp.var_s);
  cp.problem.add_equality(power, scene.power_budget_w - info_power);

  const auto steer = grid_steering(scene, grid);
  RVector consts(grid.size());
  for (int m = 0; m < grid.size(); ++m) {
    consts(m) = -std::norm(Complex(steer[static_cast<size_t>(m)].adjoint() * w0_fixed));
  }
  // quadratic form on the reduced variable uses the projected steering vector
  for (int m = 0; m < grid.size(); ++m) {
    RVector row = cp.problem.zero_expr();
    cp.problem.accum_scalar(row, cp.sc_eta, grid.desired(m));
    const CVector proj = cp.basis.adjoint() * steer[static_cast<size_t>(m)];
    cp.problem.accum_quad_form(row, cp.var_s, proj, -1.0);
    cp.problem.add_soc_row(row, consts(m));
  }
  cp.problem.set_soc_bound(cp.sc_t);
  cp.problem.set_objective_scalar(cp.sc_t);
  return cp;
}

CompiledProblem build_p6_sdr(const Scene& scene, double r0, double power_cap) {
  if (r0 < 0.0) throw std::invalid_argument("build_p6_sdr: r0 must be nonnegative");
  CompiledProblem cp;
  cp.var_w = cp.problem.add_hermitian(scene.n_antennas, "W");

  const double rate_gain = std::pow(2.0, r0);
  for (int k : scene.eavesdroppers()) {
    const CVector h = scene.target_channel(k);
    RVector row = cp.problem.zero_expr();
    cp.problem.accum_quad_form(row, cp.var_w, scene.cu_channel, -1.0 / scene.cu_noise_power_w);
    cp.problem.accum_quad_form(row, cp.var_w, h,
                               rate_gain / scene.targets[static_cast<size_t>(k)].noise_power_w);
    cp.problem.add_inequality(row, -(rate_gain - 1.0));
  }
  RVector cap = cp.problem.zero_expr();
  cp.problem.accum_trace(cap, cp.var_w);
  cp.problem.add_inequality(cap, power_cap);

  RVector obj = cp.problem.zero_expr();
  cp.problem.accum_trace(obj, cp.var_w);
  cp.problem.set_objective(obj);
  return cp;
}

CompiledProblem build_sensing_only(const Scene& scene, const SampleGrid& grid) {
  CompiledProblem cp;
  cp.var_s = cp.problem.add_hermitian(scene.n_antennas, "S");
  cp.sc_eta = cp.problem.add_scalar("eta");
  cp.sc_t = cp.problem.add_scalar("t");

  RVector power = cp.problem.zero_expr();
  cp.problem.accum_trace(power, cp.var_s);
  cp.problem.add_equality(power, scene.power_budget_w);

  add_matching_epigraph(cp, scene, grid, {{cp.var_s, -1.0}}, {}, RVector());
  return cp;
}

CompiledProblem build_rate_subproblem(const Scene& scene, double gamma_e) {
  if (gamma_e <= 0.0)
    throw std::invalid_argument("build_rate_subproblem: gamma_e must be positive");
  CompiledProblem cp;
  const int n = scene.n_antennas;
  cp.var_w = cp.problem.add_hermitian(n, "W_cc");
  cp.var_s = cp.problem.add_hermitian(n, "S_cc");
  cp.sc_xi = cp.problem.add_scalar("xi", /*nonneg=*/true);

  // Charnes-Cooper normalization g^H S' g + xi sigma0^2 = const; the constant
  // is the CU received-power scale so the substituted variables stay O(1)
  const double norm_const =
      scene.power_budget_w * scene.cu_channel.squaredNorm() + scene.cu_noise_power_w;
  RVector norm_row = cp.problem.zero_expr();
  cp.problem.accum_quad_form(norm_row, cp.var_s, scene.cu_channel, 1.0);
  cp.problem.accum_scalar(norm_row, cp.sc_xi, scene.cu_noise_power_w);
  cp.problem.add_equality(norm_row, norm_const);

  RVector power = cp.problem.zero_expr();
  cp.problem.accum_trace(power, cp.var_w);
  cp.problem.accum_trace(power, cp.var_s);
  cp.problem.accum_scalar(power, cp.sc_xi, -scene.power_budget_w);
  cp.problem.add_equality(power, 0.0);

  for (int k : scene.eavesdroppers()) {
    const CVector h = scene.target_channel(k);
    RVector row = cp.problem.zero_expr();
    cp.problem.accum_quad_form(row, cp.var_w, h, 1.0);
    cp.problem.accum_quad_form(row, cp.var_s, h, -gamma_e);
    cp.problem.accum_scalar(row, cp.sc_xi,
                            -gamma_e * scene.targets[static_cast<size_t>(k)].noise_power_w);
    cp.problem.add_inequality(row, 0.0);
  }

  RVector obj = cp.problem.zero_expr();
  cp.problem.accum_quad_form(obj, cp.var_w, scene.cu_channel, -1.0 / norm_const);
  cp.problem.set_objective(obj);
  return cp;
}

QsdpSolution solve_sdr41(const Scene& scene, const SampleGrid& grid, double gamma_e,
                         double r0, const SolverSettings& settings) {
  CompiledProblem cp = build_sdr41(scene, grid, gamma_e, r0);
  QsdpSolution sol;
  sol.result = solve(cp.problem.compile(), settings);
  if (sol.optimal()) {
    sol.w = cp.problem.matrix_value(cp.var_w, sol.result.x);
    sol.s = cp.problem.matrix_value(cp.var_s, sol.result.x);
    sol.eta = cp.problem.scalar_value(cp.sc_eta, sol.result.x);
    sol.t = cp.problem.scalar_value(cp.sc_t, sol.result.x);
    sol.block_deviation = std::max(psd_slack_deviation(cp.problem, cp.var_w, sol.result),
                                   psd_slack_deviation(cp.problem, cp.var_s, sol.result));
  }
  return sol;
}

P5Solution solve_p5(const Scene& scene, const SampleGrid& grid, const CVector& zf_direction,
                    double r0, const SolverSettings& settings) {
  CompiledProblem cp = build_p5(scene, grid, zf_direction, r0);
  P5Solution sol;
  sol.result = solve(cp.problem.compile(), settings);
  if (sol.optimal()) {
    sol.s = cp.problem.matrix_value(cp.var_s, sol.result.x);
    sol.q0 = std::max(0.0, cp.problem.scalar_value(cp.sc_q0, sol.result.x));
    sol.eta = cp.problem.scalar_value(cp.sc_eta, sol.result.x);
    sol.t = cp.problem.scalar_value(cp.sc_t, sol.result.x);
    sol.block_deviation = psd_slack_deviation(cp.problem, cp.var_s, sol.result);
  }
  return sol;
}

QsdpSolution solve_p7(const Scene& scene, const SampleGrid& grid, const CVector& w0_fixed,
                      const SolverSettings& settings) {
  CompiledProblem cp = build_p7(scene, grid, w0_fixed);
  QsdpSolution sol;
  sol.result = solve(cp.problem.compile(), settings);
  if (sol.optimal()) {
    const CMatrix reduced = cp.problem.matrix_value(cp.var_s, sol.result.x);
    sol.s = cp.basis * reduced * cp.basis.adjoint();
    sol.eta = cp.problem.scalar_value(cp.sc_eta, sol.result.x);
    sol.t = cp.problem.scalar_value(cp.sc_t, sol.result.x);
    sol.block_deviation = psd_slack_deviation(cp.problem, cp.var_s, sol.result);
  }
  return sol;
}

P6Solution solve_p6_sdr(const Scene& scene, double r0, double power_cap,
                        const SolverSettings& settings) {
  CompiledProblem cp = build_p6_sdr(scene, r0, power_cap);
  P6Solution sol;
  sol.result = solve(cp.problem.compile(), settings);
  if (sol.optimal()) {
    sol.w = cp.problem.matrix_value(cp.var_w, sol.result.x);
    sol.power = sol.w.trace().real();
    sol.block_deviation = psd_slack_deviation(cp.problem, cp.var_w, sol.result);
  }
  return sol;
}

QsdpSolution solve_sensing_only_qsdp(const Scene& scene, const SampleGrid& grid,
                                     const SolverSettings& settings) {
  CompiledProblem cp = build_sensing_only(scene, grid);
  QsdpSolution sol;
  sol.result = solve(cp.problem.compile(), settings);
  if (sol.optimal()) {
    sol.s = cp.problem.matrix_value(cp.var_s, sol.result.x);
    sol.w = CMatrix::Zero(scene.n_antennas, scene.n_antennas);
    sol.eta = cp.problem.scalar_value(cp.sc_eta, sol.result.x);
    sol.t = cp.problem.scalar_value(cp.sc_t, sol.result.x);
    sol.block_deviation = psd_slack_deviation(cp.problem, cp.var_s, sol.result);
  }
  return sol;
}

RateSolution solve_rate_subproblem(const Scene& scene, double gamma_e,
                                   const SolverSettings& settings) {
  CompiledProblem cp = build_rate_subproblem(scene, gamma_e);
  RateSolution sol;
  sol.result = solve(cp.problem.compile(), settings);
  if (sol.optimal()) sol.best_sinr = std::max(0.0, -sol.result.objective);
  return sol;
}

double sdr41_replay_violation(const Scene& scene, double gamma_e, double r0,
                              const CMatrix& w, const CMatrix& s) {
  double worst = 0.0;
  const double q = scene.power_budget_w;
  worst = std::max(worst, std::abs(w.trace().real() + s.trace().real() - q) / q);

  Eigen::SelfAdjointEigenSolver<CMatrix> ew(w, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(s, Eigen::EigenvaluesOnly);
  worst = std::max(worst, -ew.eigenvalues().minCoeff() / q);
  worst = std::max(worst, -es.eigenvalues().minCoeff() / q);

  for (int k : scene.eavesdroppers()) {
    const CVector h = scene.target_channel(k);
    const double lhs = quad(h, w);
    const double rhs =
        gamma_e * (quad(h, s) + scene.targets[static_cast<size_t>(k)].noise_power_w);
    worst = std::max(worst, (lhs - rhs) / std::max(rhs, 1e-300));
  }
  const double beta = std::pow(2.0, r0) * (1.0 + gamma_e) - 1.0;
  const double lhs = beta * (quad(scene.cu_channel, s) + scene.cu_noise_power_w);
  const double rhs = quad(scene.cu_channel, w);
  worst = std::max(worst, (lhs - rhs) / std::max(lhs, 1e-300));
  return worst;
}

}  // namespace isacbeam::conic
