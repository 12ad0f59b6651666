// SPDX-License-Identifier: Apache-2.0

#include "isacbeam/conic/solver.hpp"

#include "cone_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace isacbeam::conic {

namespace {

using detail::ConeOps;
using detail::Scaling;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Equilibration {
  RVector d_col;
  RVector d_row_a;
  RVector d_row_g;
  double cost_scale = 1.0;
};

// Ruiz equilibration; rows of one SOC/PSD block share a common factor so the
// cone geometry is preserved.
Equilibration equilibrate(StandardForm& sf) {
  const int n = sf.n_vars();
  const int p = sf.n_eq();
  const int m = static_cast<int>(sf.G.rows());
  Equilibration eq;
  eq.d_col = RVector::Ones(n);
  eq.d_row_a = RVector::Ones(p);
  eq.d_row_g = RVector::Ones(m);

  // row group boundaries in G: [start, end) with a shared scale
  std::vector<std::pair<int, int>> groups;
  for (int i = 0; i < sf.dims.l; ++i) groups.emplace_back(i, i + 1);
  int ofs = sf.dims.l;
  for (int qd : sf.dims.q) {
    groups.emplace_back(ofs, ofs + qd);
    ofs += qd;
  }
  for (int sd : sf.dims.s) {
    const int len = sd * (sd + 1) / 2;
    groups.emplace_back(ofs, ofs + len);
    ofs += len;
  }

  for (int pass = 0; pass < 6; ++pass) {
    for (int j = 0; j < n; ++j) {
      double cn = 0.0;
      if (p > 0) cn = sf.A.col(j).cwiseAbs().maxCoeff();
      cn = std::max(cn, sf.G.col(j).cwiseAbs().maxCoeff());
      if (cn <= 1e-300) continue;
      const double f = 1.0 / std::sqrt(cn);
      sf.A.col(j) *= f;
      sf.G.col(j) *= f;
      eq.d_col(j) *= f;
    }
    for (int i = 0; i < p; ++i) {
      const double rn = sf.A.row(i).cwiseAbs().maxCoeff();
      if (rn <= 1e-300) continue;
      const double f = 1.0 / std::sqrt(rn);
      sf.A.row(i) *= f;
      sf.b(i) *= f;
      eq.d_row_a(i) *= f;
    }
    for (const auto& [lo, hi] : groups) {
      const double rn = sf.G.middleRows(lo, hi - lo).cwiseAbs().maxCoeff();
      if (rn <= 1e-300) continue;
      const double f = 1.0 / std::sqrt(rn);
      sf.G.middleRows(lo, hi - lo) *= f;
      sf.h.segment(lo, hi - lo) *= f;
      eq.d_row_g.segment(lo, hi - lo) *= f;
    }
  }

  sf.c = eq.d_col.cwiseProduct(sf.c);
  eq.cost_scale = std::max(1.0, sf.c.cwiseAbs().maxCoeff());
  sf.c /= eq.cost_scale;
  return eq;
}

class KktSolver {
 public:
  KktSolver(const StandardForm& sf, const ConeOps& cone)
      : sf_(sf), cone_(cone), n_(sf.n_vars()), p_(sf.n_eq()),
        m_(static_cast<int>(sf.G.rows())) {}

  bool factor(const Scaling& sc, double delta) {
    sc_ = &sc;
    gs_.resize(m_, n_);
    for (int j = 0; j < n_; ++j) gs_.col(j) = cone_.apply_winvt(sc, sf_.G.col(j));
    const RMatrix gram = gs_.transpose() * gs_;
    const double scale = std::max(1.0, gram.diagonal().maxCoeff());
    // small absolute shift first; relative rescue ladder only if LLT fails
    const double shifts[] = {delta, 1e-14 * scale, 1e-12 * scale, 1e-10 * scale,
                             1e-8 * scale};
    for (double d : shifts) {
      RMatrix mmat = gram;
      mmat.diagonal().array() += d;
      llt_.compute(mmat);
      if (llt_.info() != Eigen::Success) continue;
      if (p_ > 0) {
        mi_at_ = llt_.solve(sf_.A.transpose());
        RMatrix schur = sf_.A * mi_at_;
        schur.diagonal().array() += d * std::max(1.0, schur.diagonal().maxCoeff() / scale);
        schur_llt_.compute(schur);
        if (schur_llt_.info() != Eigen::Success) continue;
      }
      return true;
    }
    return false;
  }

  // [0 A' G'; A 0 0; G 0 -W'W] (x,y,z) = (r1,r2,r3), refined against the
  // unregularized operator until the residual stops improving
  void solve3(const RVector& r1, const RVector& r2, const RVector& r3, RVector& x,
              RVector& y, RVector& z, int refine_steps) const {
    solve_once(r1, r2, r3, x, y, z);
    const double rhs_scale =
        1.0 + std::max({r1.lpNorm<Eigen::Infinity>(), r2.size() ? r2.lpNorm<Eigen::Infinity>() : 0.0,
                        r3.lpNorm<Eigen::Infinity>()});
    double prev_resid = std::numeric_limits<double>::infinity();
    RVector best_x = x, best_y = y, best_z = z;
    for (int r = 0; r <= std::max(refine_steps, 1) + 1; ++r) {
      const RVector e1 = r1 - (sf_.A.transpose() * y + sf_.G.transpose() * z);
      const RVector e2 = r2 - sf_.A * x;
      const RVector e3 =
          r3 - (sf_.G * x - cone_.apply_wt(*sc_, cone_.apply_w(*sc_, z)));
      const double resid =
          std::max({e1.lpNorm<Eigen::Infinity>(), e2.size() ? e2.lpNorm<Eigen::Infinity>() : 0.0,
                    e3.lpNorm<Eigen::Infinity>()});
      if (resid < prev_resid) {
        best_x = x;
        best_y = y;
        best_z = z;
        prev_resid = resid;
      }
      if (resid <= 1e-14 * rhs_scale || resid > prev_resid) break;
      RVector cx, cy, cz;
      solve_once(e1, e2, e3, cx, cy, cz);
      x += cx;
      y += cy;
      z += cz;
    }
    x = best_x;
    y = best_y;
    z = best_z;
  }

 private:
  void solve_once(const RVector& r1, const RVector& r2, const RVector& r3, RVector& x,
                  RVector& y, RVector& z) const {
    const RVector t = cone_.apply_winvt(*sc_, r3);
    const RVector u = r1 + gs_.transpose() * t;
    if (p_ > 0) {
      const RVector miu = llt_.solve(u);
      y = schur_llt_.solve(sf_.A * miu - r2);
      x = llt_.solve(u - sf_.A.transpose() * y);
    } else {
      y.resize(0);
      x = llt_.solve(u);
    }
    z = cone_.apply_winv(*sc_, gs_ * x - t);
  }

  const StandardForm& sf_;
  const ConeOps& cone_;
  int n_, p_, m_;
  const Scaling* sc_ = nullptr;
  RMatrix gs_;
  RMatrix mi_at_;
  Eigen::LLT<RMatrix> llt_;
  Eigen::LLT<RMatrix> schur_llt_;
};

Scaling identity_scaling(const ConeOps& cone) {
  Scaling sc;
  const ConeDims& dims = cone.dims();
  sc.w_l = RVector::Ones(dims.l);
  for (int qd : dims.q) {
    detail::SocScaling b;
    b.eta = 1.0;
    b.wbar = RVector::Zero(qd);
    b.wbar(0) = 1.0;
    sc.q.push_back(std::move(b));
  }
  for (int sd : dims.s) {
    detail::PsdScaling b;
    b.r = RMatrix::Identity(sd, sd);
    b.r_inv = RMatrix::Identity(sd, sd);
    b.lam = RVector::Ones(sd);
    sc.s.push_back(std::move(b));
  }
  sc.lambda = cone.identity();
  return sc;
}

}  // namespace

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::max_iterations: return "max_iterations";
    case SolveStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

SolverResult solve(const StandardForm& input, const SolverSettings& settings) {
  StandardForm sf = input;
  const int n = sf.n_vars();
  const int p = sf.n_eq();
  const int m = static_cast<int>(sf.G.rows());
  if (m != sf.dims.dim() || static_cast<int>(sf.h.size()) != m ||
      static_cast<int>(sf.b.size()) != p || static_cast<int>(sf.G.cols()) != n)
    throw std::invalid_argument("solve: inconsistent problem dimensions");

  Equilibration eq;
  if (settings.equilibrate) {
    eq = equilibrate(sf);
  } else {
    eq.d_col = RVector::Ones(n);
    eq.d_row_a = RVector::Ones(p);
    eq.d_row_g = RVector::Ones(m);
  }

  const ConeOps cone(sf.dims);
  KktSolver kkt(sf, cone);
  const RVector e = cone.identity();
  const double deg = cone.degree();
  const double resx0 = std::max(1.0, sf.c.norm());
  const double resy0 = std::max(1.0, sf.b.norm());
  const double resz0 = std::max(1.0, sf.h.norm());
  constexpr double kDelta = 1e-11;

  SolverResult res;
  auto fail = [&](const std::string& msg) {
    res.status = SolveStatus::numerical_failure;
    res.message = msg;
    return res;
  };

  // initial point from the identity-scaling KKT system
  const Scaling id = identity_scaling(cone);
  if (!kkt.factor(id, kDelta)) return fail("initial KKT factorization failed");

  RVector x, y, z, s, tmp_x, tmp_y, tmp_z;
  kkt.solve3(RVector::Zero(n), sf.b, sf.h, x, tmp_y, tmp_z, settings.refine_steps);
  s = -tmp_z;
  double me = cone.min_eig(s);
  if (me <= 1e-8 * std::max(1.0, s.norm())) s += (1.0 - me) * e;
  kkt.solve3(-sf.c, RVector::Zero(p), RVector::Zero(m), tmp_x, y, z,
             settings.refine_steps);
  me = cone.min_eig(z);
  if (me <= 1e-8 * std::max(1.0, z.norm())) z += (1.0 - me) * e;
  double tau = 1.0, kappa = 1.0;

  auto finalize = [&](SolveStatus status, const std::string& msg) {
    res.status = status;
    res.message = msg;
    RVector xs = x / tau, ys = y / tau, zs = z / tau, ss = s / tau;
    res.x = eq.d_col.cwiseProduct(xs);
    res.y = eq.cost_scale * eq.d_row_a.cwiseProduct(ys);
    res.z = eq.cost_scale * eq.d_row_g.cwiseProduct(zs);
    res.s = ss.cwiseQuotient(eq.d_row_g);
    res.objective = input.c.dot(res.x);
    return res;
  };

  Scaling sc;
  int stall_count = 0;
  int no_progress = 0;
  double best_score = kInf;
  struct Snapshot {
    RVector x, y, z, s;
    double tau = 1.0, kappa = 1.0;
    double gap = 0.0, relgap = 0.0, pres = 0.0, dres = 0.0;
    int it = 0;
  } best;
  auto restore_best = [&]() {
    if (!(best_score < kInf)) return;
    x = best.x;
    y = best.y;
    z = best.z;
    s = best.s;
    tau = best.tau;
    kappa = best.kappa;
    res.gap = best.gap;
    res.rel_gap = best.relgap;
    res.primal_resid = best.pres;
    res.dual_resid = best.dres;
    res.iterations = best.it;
  };
  const bool trace_iters = std::getenv("ISACBEAM_SOLVER_TRACE") != nullptr;
  for (int it = 0;; ++it) {
    const RVector hx = sf.A.transpose() * y + sf.G.transpose() * z + sf.c * tau;
    const RVector hy = sf.A * x - sf.b * tau;
    const RVector hz = sf.G * x + s - sf.h * tau;
    const double ht = sf.c.dot(x) + sf.b.dot(y) + sf.h.dot(z) + kappa;

    const double gap = s.dot(z);
    const double gap_t = gap / (tau * tau);
    const double pcost = sf.c.dot(x) / tau;
    const double dcost = -(sf.b.dot(y) + sf.h.dot(z)) / tau;
    double relgap = kInf;
    if (pcost < 0.0) relgap = gap_t / (-pcost);
    else if (dcost > 0.0) relgap = gap_t / dcost;
    const double pres =
        std::max(hy.norm() / tau / resy0, hz.norm() / tau / resz0);
    const double dres = hx.norm() / tau / resx0;

    res.gap = gap_t;
    res.rel_gap = relgap;
    res.primal_resid = pres;
    res.dual_resid = dres;
    res.iterations = it;
    if (trace_iters) {
      std::fprintf(stderr,
                   "it=%3d pcost=%+.6e gap=%.2e pres=%.2e dres=%.2e tau=%.2e kappa=%.2e\n",
                   it, pcost, gap_t, pres, dres, tau, kappa);
    }

    if (pres <= settings.tol_feas && dres <= settings.tol_feas &&
        (gap_t <= settings.tol_gap || relgap <= settings.tol_gap)) {
      return finalize(SolveStatus::optimal, "");
    }
    const double denom_p = -(sf.h.dot(z) + sf.b.dot(y));
    if (denom_p > 0.0) {
      const double pinfres =
          (sf.A.transpose() * y + sf.G.transpose() * z).norm() / resx0 / denom_p;
      if (pinfres <= settings.tol_feas) {
        return finalize(SolveStatus::infeasible, "primal infeasibility certificate found");
      }
    }
    if (sf.c.dot(x) < 0.0) {
      const double dinfres = std::max((sf.A * x).norm() / resy0,
                                      (sf.G * x + s).norm() / resz0) /
                             (-sf.c.dot(x));
      if (dinfres <= settings.tol_feas) {
        return finalize(SolveStatus::numerical_failure,
                        "dual infeasibility certificate (objective unbounded below)");
      }
    }

    // once the linear solves can no longer reduce the worst metric, more
    // iterations only bounce the iterate around the optimal face
    const double score = std::max({pres / settings.tol_feas, dres / settings.tol_feas,
                                   std::min(gap_t, relgap) / settings.tol_gap});
    if (score < 0.98 * best_score) {
      best_score = score;
      best = {x, y, z, s, tau, kappa, gap_t, relgap, pres, dres, it};
      no_progress = 0;
    } else if (++no_progress >= 10) {
      restore_best();
      return finalize(SolveStatus::numerical_failure,
                      "no further progress toward the requested tolerances");
    }
    if (it >= settings.max_iters) {
      restore_best();
      return finalize(SolveStatus::max_iterations, "iteration limit reached");
    }

    const double mu = (gap + tau * kappa) / (deg + 1.0);
    if (!cone.compute_scaling(s, z, sc)) return fail("iterate left the cone interior");
    if (!kkt.factor(sc, kDelta)) return fail("KKT factorization failed");

    RVector x1, y1, z1;
    kkt.solve3(-sf.c, sf.b, sf.h, x1, y1, z1, settings.refine_steps);
    // c'x1 + b'y1 + h'z1 = -|W z1|^2 identically; the norm form keeps the sign
    const double dg_den = -(cone.apply_w(sc, z1).squaredNorm() + kappa / tau);
    if (!(dg_den < 0.0)) return fail("degenerate Newton system");

    RVector dx, dy, dz, ds;
    double dtau = 0.0, dkappa = 0.0;
    auto direction = [&](const RVector& ds_rhs, double dkt_rhs, double rfac) {
      const RVector lam_sol = cone.jordan_solve(sc, ds_rhs);
      const RVector bz3 = -rfac * hz - cone.apply_wt(sc, lam_sol);
      const double bt4 = -rfac * ht - dkt_rhs / tau;
      RVector x2, y2, z2;
      kkt.solve3(-rfac * hx, -rfac * hy, bz3, x2, y2, z2, settings.refine_steps);
      dtau = (bt4 - (sf.c.dot(x2) + sf.b.dot(y2) + sf.h.dot(z2))) / dg_den;
      dx = x2 + dtau * x1;
      dy = y2 + dtau * y1;
      dz = z2 + dtau * z1;
      ds = cone.apply_wt(sc, lam_sol - cone.apply_w(sc, dz));
      dkappa = (dkt_rhs - kappa * dtau) / tau;
    };

    auto boundary_step = [&]() {
      double a = std::min(cone.max_step(s, ds), cone.max_step(z, dz));
      if (dtau < 0.0) a = std::min(a, -tau / dtau);
      if (dkappa < 0.0) a = std::min(a, -kappa / dkappa);
      return a;
    };

    const RVector lam_sq = cone.lambda_square(sc);

    // predictor
    direction(-lam_sq, -tau * kappa, 1.0);
    const double a_aff = std::min(boundary_step(), 1.0);
    const double sigma = std::pow(1.0 - a_aff, 3);

    // corrector
    const RVector corr = cone.jordan_product(cone.apply_winvt(sc, ds),
                                             cone.apply_w(sc, dz));
    const double dkt_corr = dtau * dkappa;
    direction(-lam_sq - corr + sigma * mu * e,
              -tau * kappa - dkt_corr + sigma * mu, 1.0 - sigma);
    const double alpha = std::min(1.0, 0.99 * boundary_step());

    x += alpha * dx;
    y += alpha * dy;
    z += alpha * dz;
    s += alpha * ds;
    tau += alpha * dtau;
    kappa += alpha * dkappa;
    if (tau <= 0.0 || kappa <= 0.0) return fail("tau/kappa left the positive orthant");
    if (alpha < 1e-8) {
      if (++stall_count >= 3) return fail("step size collapsed");
    } else {
      stall_count = 0;
    }
  }
}

}  // namespace isacbeam::conic
