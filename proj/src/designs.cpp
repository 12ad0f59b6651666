// SPDX-License-Identifier: Apache-2.0

#include "isacbeam/designs.hpp"

#include "isacbeam/model.hpp"
#include "isacbeam/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace isacbeam::designs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double min_eig(const CMatrix& x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(x, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

RVector log_grid(double lo, double hi, int n) {
  RVector g(n);
  const double ratio = std::log(hi / lo);
  for (int i = 0; i < n; ++i) g(i) = lo * std::exp(ratio * i / (n - 1));
  return g;
}

RVector lin_grid(double lo, double hi, int n) {
  RVector g(n);
  for (int i = 0; i < n; ++i) g(i) = lo + (hi - lo) * i / (n - 1);
  return g;
}

template <class Payload>
struct SearchOutcome {
  bool found = false;
  double gamma = 0.0;
  double value = kInf;
  Payload payload{};
  OuterSearchTrace trace;
};

// Grid-then-refine minimization of a per-gamma solve. Evaluations within a
// round are independent; the incumbent is chosen by (value, gamma) so serial
// and parallel execution select the same point. Seed points are merged into
// the first round's grid.
template <class Payload, class Eval>
SearchOutcome<Payload> outer_search(const Eval& eval, double lo, double hi,
                                    const SearchParams& sp, ExecPolicy policy,
                                    const std::vector<double>& seeds = {}) {
  SearchOutcome<Payload> out;
  if (!(hi > lo)) throw std::invalid_argument("outer_search: empty gamma interval");

  double lo_b = lo, hi_b = hi;
  for (int round = 0; round <= sp.n_refine; ++round) {
    RVector grid = round == 0 ? log_grid(lo, hi, std::max(sp.n_grid, 2))
                              : lin_grid(lo_b, hi_b, std::max(sp.refine_points, 2));
    if (round == 0 && !seeds.empty()) {
      std::vector<double> merged(grid.data(), grid.data() + grid.size());
      for (double s : seeds) {
        if (s >= lo && s <= hi) merged.push_back(s);
      }
      std::sort(merged.begin(), merged.end());
      merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
      grid = Eigen::Map<const RVector>(merged.data(), static_cast<int>(merged.size()));
    }
    const int n = static_cast<int>(grid.size());
    std::vector<double> values(static_cast<size_t>(n), kInf);
    std::vector<bool> feas(static_cast<size_t>(n), false);
    std::vector<Payload> payloads(static_cast<size_t>(n));
    parallel_for(n, policy, [&](std::int64_t i) {
      auto [value, ok, payload] = eval(grid(static_cast<int>(i)));
      values[static_cast<size_t>(i)] = value;
      feas[static_cast<size_t>(i)] = ok;
      payloads[static_cast<size_t>(i)] = std::move(payload);
    });
    for (int i = 0; i < n; ++i) {
      out.trace.points.push_back({grid(i), values[static_cast<size_t>(i)],
                                  feas[static_cast<size_t>(i)]});
      const bool better =
          feas[static_cast<size_t>(i)] &&
          (!out.found || values[static_cast<size_t>(i)] < out.value ||
           (values[static_cast<size_t>(i)] == out.value && grid(i) < out.gamma));
      if (better) {
        out.found = true;
        out.value = values[static_cast<size_t>(i)];
        out.gamma = grid(i);
        out.payload = payloads[static_cast<size_t>(i)];
      }
    }
    if (!out.found) break;  // nothing feasible on the base grid
    // bracket the incumbent between its grid neighbours
    lo_b = grid(0);
    hi_b = grid(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
      if (grid(i) <= out.gamma && out.gamma <= grid(i + 1)) {
        lo_b = grid(i);
        hi_b = grid(i + 1);
        if (i > 0 && grid(i) == out.gamma) lo_b = grid(i - 1);
        break;
      }
    }
  }
  out.trace.gamma_star = out.gamma;
  out.trace.value_star = out.value;
  out.trace.refined_lo = lo_b;
  out.trace.refined_hi = hi_b;
  return out;
}

double gamma_upper_bound(const Scene& scene) {
  double hi = 0.0;
  for (int k : scene.eavesdroppers()) {
    const CVector h = scene.target_channel(k);
    hi = std::max(hi, scene.power_budget_w * h.squaredNorm() /
                          scene.targets[static_cast<size_t>(k)].noise_power_w);
  }
  return hi;
}

SolverDiag make_diag(const conic::SolverResult& res, double block_dev) {
  SolverDiag d;
  d.status = res.status;
  d.iterations = res.iterations;
  d.gap = res.gap;
  d.primal_resid = res.primal_resid;
  d.dual_resid = res.dual_resid;
  d.block_deviation = block_dev;
  d.block_repair_warning = block_dev > 1e-7;
  return d;
}

DesignReport finish_report(std::string name, const Scene& scene, const SampleGrid& grid,
                           BeamDesign design, SolverDiag diag, double r0) {
  DesignReport rep;
  rep.design_name = std::move(name);
  rep.design = std::move(design);
  rep.eta_star = rep.design.scale;
  rep.info_gain = model::beampattern_samples(
      rep.design.info_beam * rep.design.info_beam.adjoint(), grid, scene);
  rep.sensing_gain = model::beampattern_samples(rep.design.sensing_cov, grid, scene);
  rep.total_gain = rep.info_gain + rep.sensing_gain;
  rep.matching_error = model::matching_error(rep.design, grid, scene);
  rep.cu_sinr = model::sinr_cu(rep.design, scene);
  for (int k : scene.eavesdroppers()) {
    rep.eve_sinrs.push_back(model::sinr_eavesdropper(rep.design, k, scene));
  }
  rep.secrecy_rate = model::secrecy_rate(rep.design, scene);
  rep.diag = diag;

  const double q = scene.power_budget_w;
  const double total_power = rep.design.info_power() + rep.design.sensing_power();
  if (std::abs(total_power - q) > 1e-6 * q)
    throw NumericalError("design violates the transmit power budget");
  if (rep.secrecy_rate < r0 - 1e-6) {
    std::ostringstream msg;
    msg << rep.design_name << ": recomputed secrecy rate " << rep.secrecy_rate
        << " fell below the requirement " << r0;
    throw NumericalError(msg.str());
  }
  return rep;
}

}  // namespace

namespace {

// negative eigenvalues within the tolerance are solver noise; clip them so the
// Cauchy-Schwarz dominance argument applies exactly
CMatrix repair_psd(const CMatrix& x, double floor_value, const char* what) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(x);
  const double lo = es.eigenvalues().minCoeff();
  if (lo < -floor_value)
    throw std::invalid_argument(std::string("rank_one_extract: ") + what +
                                " is not PSD within tolerance");
  if (lo >= 0.0) return x;
  const RVector lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

BeamDesign rank_one_extract(const CMatrix& w_raw, const CMatrix& s_raw,
                            double eta_tilde, const CVector& g,
                            const ExtractOptions& opts) {
  const int n = static_cast<int>(g.size());
  if (w_raw.rows() != n || s_raw.rows() != n)
    throw std::invalid_argument("rank_one_extract: dimension mismatch");
  const double tr_sum = w_raw.trace().real() + s_raw.trace().real();
  const double psd_floor = opts.eps_psd_rel * std::max(tr_sum, 1e-300);
  const CMatrix w_tilde = repair_psd(w_raw, psd_floor, "the information covariance");
  const CMatrix s_tilde = repair_psd(s_raw, psd_floor, "the sensing covariance");
  const double tr_w = w_tilde.trace().real();

  const double cu_power = std::real(Complex(g.adjoint() * w_tilde * g));
  const double null_floor = opts.eps_null_rel * std::max(g.squaredNorm() * tr_w, 1e-300);
  if (!(cu_power > null_floor))
    throw DegenerateExtraction("rank_one_extract: covariance carries no power toward the CU");

  BeamDesign d;
  d.info_beam = (w_tilde * g) / std::sqrt(cu_power);
  const CMatrix w_star = d.info_beam * d.info_beam.adjoint();
  d.sensing_cov = w_tilde + s_tilde - w_star;
  d.scale = eta_tilde;

  // sum preservation, dominance both ways, CU form preservation
  const CMatrix sum_dev = (d.sensing_cov + w_star) - (w_tilde + s_tilde);
  if (sum_dev.cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, tr_sum))
    throw NumericalError("rank_one_extract: covariance sum not preserved");
  if (min_eig(w_tilde - w_star) < -1e-8 * std::max(tr_w, 1e-300))
    throw NumericalError("rank_one_extract: extracted beam not dominated by the relaxed W");
  if (min_eig(d.sensing_cov - s_tilde) < -1e-8 * std::max(tr_sum, 1e-300))
    throw NumericalError("rank_one_extract: sensing covariance lost PSD dominance");
  const double cu_after = std::real(Complex(g.adjoint() * w_star * g));
  if (std::abs(cu_after - cu_power) > 1e-9 * cu_power)
    throw NumericalError("rank_one_extract: CU quadratic form not preserved");
  return d;
}

double max_secrecy_rate(const Scene& scene, const SearchParams& search,
                        const conic::SolverSettings& settings, ExecPolicy policy,
                        OuterSearchTrace* trace_out) {
  scene.validate();
  const double hi = gamma_upper_bound(scene);
  auto eval = [&](double gamma) -> std::tuple<double, bool, double> {
    const conic::RateSolution sol = conic::solve_rate_subproblem(scene, gamma, settings);
    if (!sol.optimal()) return {kInf, false, 0.0};
    const double rate = std::log2((1.0 + sol.best_sinr) / (1.0 + gamma));
    return {-rate, true, sol.best_sinr};
  };
  auto out = outer_search<double>(eval, search.gamma_lo, hi, search, policy);
  if (trace_out != nullptr) *trace_out = out.trace;
  if (!out.found) throw NumericalError("max_secrecy_rate: no subproblem solved");
  return std::max(0.0, -out.value);
}

DesignReport solve_optimal(const Scene& scene, const SampleGrid& grid, double r0,
                           const SearchParams& search,
                           const conic::SolverSettings& settings, ExecPolicy policy) {
  scene.validate();
  if (r0 < 0.0) throw std::invalid_argument("solve_optimal: r0 must be nonnegative");

  OuterSearchTrace rate_trace;
  const double max_rate = max_secrecy_rate(scene, search, settings, policy, &rate_trace);
  if (r0 > max_rate + 1e-4) {
    std::ostringstream msg;
    msg << "secrecy rate requirement " << r0 << " bps/Hz exceeds the achievable maximum "
        << max_rate << " bps/Hz";
    throw FeasibilityError(msg.str(), max_rate);
  }

  const double hi = gamma_upper_bound(scene);
  auto eval = [&](double gamma) -> std::tuple<double, bool, conic::QsdpSolution> {
    conic::QsdpSolution sol = conic::solve_sdr41(scene, grid, gamma, r0, settings);
    if (!sol.optimal()) return {kInf, false, std::move(sol)};
    return {sol.t * sol.t, true, std::move(sol)};
  };
  // the rate-optimal gamma is feasible whenever r0 is; seeding it keeps the
  // search alive when the feasible window falls between base grid points
  auto out = outer_search<conic::QsdpSolution>(eval, search.gamma_lo, hi, search, policy,
                                               {rate_trace.gamma_star});
  if (!out.found)
    throw NumericalError("solve_optimal: no feasible point in the gamma search range");

  const conic::QsdpSolution& relaxed = out.payload;
  BeamDesign design;
  try {
    design = rank_one_extract(relaxed.w, relaxed.s, relaxed.eta, scene.cu_channel);
  } catch (const DegenerateExtraction&) {
    if (r0 > 0.0) throw;
    design.info_beam = CVector::Zero(scene.n_antennas);
    design.sensing_cov = relaxed.w + relaxed.s;
    design.scale = relaxed.eta;
  }

  DesignReport rep = finish_report("optimal", scene, grid, std::move(design),
                                   make_diag(relaxed.result, relaxed.block_deviation), r0);
  rep.gamma_e_star = out.gamma;
  rep.trace = std::move(out.trace);
  return rep;
}

DesignReport solve_zf(const Scene& scene, const SampleGrid& grid, double r0,
                      const conic::SolverSettings& settings) {
  scene.validate();
  if (r0 < 0.0) throw std::invalid_argument("solve_zf: r0 must be nonnegative");
  const std::vector<int> eves = scene.eavesdroppers();
  const int n = scene.n_antennas;
  const int n_eve = static_cast<int>(eves.size());
  if (n <= n_eve)
    throw std::invalid_argument("solve_zf: needs more antennas than eavesdroppers");

  CMatrix h(n_eve, n);
  for (int i = 0; i < n_eve; ++i) h.row(i) = scene.target_channel(eves[static_cast<size_t>(i)]).adjoint();
  Eigen::JacobiSVD<CMatrix> svd(h, Eigen::ComputeFullV);
  const RVector sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > 1e-10 * sv(0)) ++rank;
  }
  const CMatrix v2 = svd.matrixV().rightCols(n - rank);

  const CVector v2g = v2.adjoint() * scene.cu_channel;
  const double proj_norm = v2g.norm();
  if (proj_norm <= 1e-12 * scene.cu_channel.norm()) {
    if (r0 > 0.0)
      throw FeasibilityError("solve_zf: CU channel lies in the eavesdropper span", 0.0);
    // nothing to send; the design degenerates to sensing-only
    DesignReport rep = solve_sensing_only(scene, grid, settings);
    rep.design_name = "zf";
    return rep;
  }
  const CVector direction = v2 * (v2g / proj_norm);

  const conic::P5Solution sol = conic::solve_p5(scene, grid, direction, r0, settings);
  if (sol.result.status == conic::SolveStatus::infeasible) {
    const double zf_max_rate =
        std::log2(1.0 + scene.power_budget_w * proj_norm * proj_norm / scene.cu_noise_power_w);
    std::ostringstream msg;
    msg << "zero-forcing design cannot reach " << r0 << " bps/Hz (family maximum "
        << zf_max_rate << " bps/Hz)";
    throw FeasibilityError(msg.str(), zf_max_rate);
  }
  if (!sol.optimal()) throw NumericalError("solve_zf: subproblem failed: " + sol.result.message);

  BeamDesign design;
  design.info_beam = std::sqrt(sol.q0) * direction;
  design.sensing_cov = sol.s;
  design.scale = sol.eta;

  for (int k : eves) {
    const CVector hk = scene.target_channel(k);
    const double leak = std::abs(Complex(hk.adjoint() * design.info_beam));
    if (leak > 1e-8 * hk.norm() * std::max(design.info_beam.norm(), 1e-300))
      throw NumericalError("solve_zf: information beam leaks outside the nullspace");
  }
  return finish_report("zf", scene, grid, std::move(design),
                       make_diag(sol.result, sol.block_deviation), r0);
}

namespace {

// minimum transmit power making direction u meet the AN-free secrecy target,
// +inf when the direction cannot
double binding_power(const Scene& scene, const CVector& u, double r0) {
  const double c = std::pow(2.0, r0) - 1.0;
  if (c <= 0.0) return 0.0;
  const double rate_gain = std::pow(2.0, r0);
  double min_margin = kInf;
  for (int k : scene.eavesdroppers()) {
    const CVector h = scene.target_channel(k);
    const double margin =
        std::norm(Complex(scene.cu_channel.adjoint() * u)) / scene.cu_noise_power_w -
        rate_gain * std::norm(Complex(h.adjoint() * u)) /
            scene.targets[static_cast<size_t>(k)].noise_power_w;
    min_margin = std::min(min_margin, margin);
  }
  if (min_margin <= 0.0) return kInf;
  return c / min_margin;
}

}  // namespace

DesignReport solve_separate(const Scene& scene, const SampleGrid& grid, double r0,
                            const conic::SolverSettings& settings, std::uint64_t seed) {
  scene.validate();
  if (r0 < 0.0) throw std::invalid_argument("solve_separate: r0 must be nonnegative");
  const int n = scene.n_antennas;
  const double q = scene.power_budget_w;

  CVector w0 = CVector::Zero(n);
  SolverDiag diag;
  diag.status = conic::SolveStatus::optimal;
  if (r0 > 0.0) {
    const conic::P6Solution p6 = conic::solve_p6_sdr(scene, r0, q, settings);
    if (p6.result.status == conic::SolveStatus::infeasible) {
      throw FeasibilityError(
          "separate design: secrecy target unreachable without artificial noise",
          std::numeric_limits<double>::quiet_NaN());
    }
    if (!p6.optimal())
      throw NumericalError("solve_separate: power minimization failed: " + p6.result.message);
    diag = make_diag(p6.result, p6.block_deviation);

    Eigen::SelfAdjointEigenSolver<CMatrix> es(p6.w);
    const RVector lam = es.eigenvalues();
    const double lam_max = lam(n - 1);
    std::vector<CVector> candidates;
    candidates.push_back(es.eigenvectors().col(n - 1));
    if (n >= 2 && lam(n - 2) > 1e-6 * lam_max) {
      // relaxed solution is not rank-one; fall back to randomized directions
      diag.randomization_used = true;
      Rng rng(seed);
      const RVector lam_clip = lam.cwiseMax(0.0).cwiseSqrt();
      for (int trial = 0; trial < 200; ++trial) {
        CVector draw = CVector::Zero(n);
        for (int i = 0; i < n; ++i) {
          draw += lam_clip(i) * Complex(rng.gaussian(), rng.gaussian()) *
                  es.eigenvectors().col(i);
        }
        const double norm = draw.norm();
        if (norm > 0.0) candidates.push_back(draw / norm);
      }
    }
    double best_power = kInf;
    CVector best_dir;
    for (const CVector& u : candidates) {
      const double p = binding_power(scene, u, r0);
      if (p <= q && p < best_power) {
        best_power = p;
        best_dir = u;
      }
    }
    if (!(best_power < kInf))
      throw NumericalError("solve_separate: no rank-one beam met the secrecy target");
    w0 = std::sqrt(best_power) * best_dir;
  }

  const double remaining = q - w0.squaredNorm();
  BeamDesign design;
  design.info_beam = w0;
  if (remaining <= 1e-12 * q) {
    design.sensing_cov = CMatrix::Zero(n, n);
    design.scale = model::optimal_scale(design.total_covariance(), grid, scene);
  } else {
    const conic::QsdpSolution p7 = conic::solve_p7(scene, grid, w0, settings);
    if (!p7.optimal())
      throw NumericalError("solve_separate: sensing stage failed: " + p7.result.message);
    design.sensing_cov = p7.s;
    design.scale = p7.eta;
    diag.block_deviation = std::max(diag.block_deviation, p7.block_deviation);
    diag.block_repair_warning = diag.block_deviation > 1e-7;
    if (r0 <= 0.0) diag = make_diag(p7.result, p7.block_deviation);
  }

  // AN must stay invisible to the CU
  const double an_at_cu =
      std::real(Complex(scene.cu_channel.adjoint() * design.sensing_cov * scene.cu_channel));
  const double tr_s = design.sensing_cov.trace().real();
  if (an_at_cu > 1e-8 * scene.cu_channel.squaredNorm() * std::max(tr_s, 1e-300))
    throw NumericalError("solve_separate: sensing covariance interferes with the CU");

  return finish_report("separate", scene, grid, std::move(design), diag, r0);
}

DesignReport solve_sensing_only(const Scene& scene, const SampleGrid& grid,
                                const conic::SolverSettings& settings) {
  scene.validate();
  const conic::QsdpSolution sol = conic::solve_sensing_only_qsdp(scene, grid, settings);
  if (!sol.optimal())
    throw NumericalError("solve_sensing_only: solver failed: " + sol.result.message);
  BeamDesign design;
  design.info_beam = CVector::Zero(scene.n_antennas);
  design.sensing_cov = sol.s;
  design.scale = sol.eta;
  return finish_report("sensing_only", scene, grid, std::move(design),
                       make_diag(sol.result, sol.block_deviation), 0.0);
}

}  // namespace isacbeam::designs
