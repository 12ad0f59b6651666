// SPDX-License-Identifier: Apache-2.0

#include "isacbeam/conic/embedding.hpp"
#include "isacbeam/conic/problem.hpp"
#include "isacbeam/conic/solver.hpp"
#include "isacbeam/rng.hpp"

#include <doctest.h>

using namespace isacbeam;
using namespace isacbeam::conic;

namespace {

// independent KKT replay on the original (unscaled) data
void check_kkt(const StandardForm& sf, const SolverResult& res, double tol) {
  REQUIRE(res.status == SolveStatus::optimal);
  const RVector slack = sf.h - sf.G * res.x;
  CHECK((slack - res.s).lpNorm<Eigen::Infinity>() <
        tol * (1 + sf.h.lpNorm<Eigen::Infinity>()));
  if (sf.n_eq() > 0)
    CHECK((sf.A * res.x - sf.b).lpNorm<Eigen::Infinity>() <
          tol * (1 + sf.b.lpNorm<Eigen::Infinity>()));
  const RVector dual = sf.A.transpose() * res.y + sf.G.transpose() * res.z + sf.c;
  CHECK(dual.lpNorm<Eigen::Infinity>() < tol * (1 + sf.c.lpNorm<Eigen::Infinity>()));
  CHECK(std::abs(res.s.dot(res.z)) < std::sqrt(tol));
}

StandardForm random_feasible_problem(Rng& rng) {
  StandardForm sf;
  const int n = 4 + static_cast<int>(rng.next_u64() % 6);
  const int p = static_cast<int>(rng.next_u64() % 3);
  sf.dims.l = 2 + static_cast<int>(rng.next_u64() % 3);
  if (rng.next_u64() % 2) sf.dims.q.push_back(3 + static_cast<int>(rng.next_u64() % 3));
  if (rng.next_u64() % 2) sf.dims.s.push_back(2 + static_cast<int>(rng.next_u64() % 2));
  int m = sf.dims.dim();
  while (m < n + 2) {
    ++sf.dims.l;
    ++m;
  }
  sf.A.resize(p, n);
  sf.G.resize(m, n);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < n; ++j) sf.A(i, j) = rng.gaussian();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) sf.G(i, j) = rng.gaussian();

  auto interior = [&]() {
    RVector v = RVector::Zero(m);
    int ofs = 0;
    for (int i = 0; i < sf.dims.l; ++i) v(ofs++) = 0.5 + rng.uniform();
    for (int qd : sf.dims.q) {
      RVector u(qd - 1);
      for (int i = 0; i < qd - 1; ++i) u(i) = rng.gaussian();
      v(ofs) = u.norm() + 0.3 + rng.uniform();
      v.segment(ofs + 1, qd - 1) = u;
      ofs += qd;
    }
    for (int sd : sf.dims.s) {
      RMatrix x(sd, sd);
      for (int i = 0; i < sd; ++i)
        for (int j = 0; j < sd; ++j) x(i, j) = rng.gaussian();
      RMatrix psd = x * x.transpose() + (0.2 + rng.uniform()) * RMatrix::Identity(sd, sd);
      v.segment(ofs, svec_dim(sd)) = svec(psd);
      ofs += svec_dim(sd);
    }
    return v;
  };

  RVector x0(n), y0(p);
  for (int j = 0; j < n; ++j) x0(j) = rng.gaussian();
  for (int i = 0; i < p; ++i) y0(i) = rng.gaussian();
  const RVector s0 = interior();
  const RVector z0 = interior();
  sf.h = sf.G * x0 + s0;
  sf.b = sf.A * x0;
  sf.c = -(sf.G.transpose() * z0 + sf.A.transpose() * y0);
  return sf;
}

}  // namespace

TEST_CASE("trivially feasible epigraph solves to zero") {
  // min t subject to ||0|| <= t
  StandardForm sf;
  sf.c = RVector::Ones(1);
  sf.A.resize(0, 1);
  sf.b.resize(0);
  sf.G = RMatrix::Zero(3, 1);
  sf.G(0, 0) = -1.0;
  sf.h = RVector::Zero(3);
  sf.dims.q = {3};
  const SolverResult res = solve(sf);
  CHECK(res.status == SolveStatus::optimal);
  CHECK(std::abs(res.objective) < 1e-7);
}

TEST_CASE("minimum trace above a Hermitian floor equals the PSD part") {
  // min tr X subject to X >= A and X >= 0; optimum is the positive part of A
  Rng rng(31);
  CMatrix a(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = Complex(rng.gaussian(), rng.gaussian());
  a = 0.5 * (a + a.adjoint()).eval();

  ConicProblem cp;
  const int x = cp.add_hermitian(3, "X");
  // X - A lives in a second PSD block through an explicit slack variable
  const int slack = cp.add_hermitian(3, "X_minus_A");
  for (int d = 0; d < hvec_dim(3); ++d) {
    RVector row = RVector::Zero(cp.n_vars());
    row(d) = 1.0;
    row(hvec_dim(3) + d) = -1.0;
    cp.add_equality(row, hvec(a)(d));
  }
  RVector obj = cp.zero_expr();
  cp.accum_trace(obj, x);
  cp.set_objective(obj);

  const SolverResult res = solve(cp.compile());
  REQUIRE(res.status == SolveStatus::optimal);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
  const double expected = es.eigenvalues().cwiseMax(0.0).sum();
  CHECK(res.objective == doctest::Approx(expected).epsilon(1e-7));
  (void)slack;
}

TEST_CASE("infeasible bounds produce an infeasibility certificate") {
  StandardForm sf;
  sf.c = RVector::Zero(1);
  sf.A.resize(0, 1);
  sf.b.resize(0);
  sf.G.resize(2, 1);
  sf.G << -1.0, 1.0;
  sf.h.resize(2);
  sf.h << 0.0, -1.0;  // x >= 0 and x <= -1
  sf.dims.l = 2;
  CHECK(solve(sf).status == SolveStatus::infeasible);
}

TEST_CASE("random mixed-cone problems satisfy the KKT conditions") {
  Rng rng(33);
  for (int trial = 0; trial < 15; ++trial) {
    const StandardForm sf = random_feasible_problem(rng);
    SolverSettings st;
    const SolverResult res = solve(sf, st);
    CAPTURE(trial);
    check_kkt(sf, res, st.tol_feas * 100);
  }
}

TEST_CASE("solver is deterministic") {
  Rng rng(34);
  const StandardForm sf = random_feasible_problem(rng);
  const SolverResult a = solve(sf);
  const SolverResult b = solve(sf);
  REQUIRE(a.status == SolveStatus::optimal);
  REQUIRE(b.status == SolveStatus::optimal);
  CHECK(a.iterations == b.iterations);
  CHECK((a.x - b.x).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(a.objective == b.objective);
}

TEST_CASE("iteration cap reports max_iterations") {
  Rng rng(35);
  const StandardForm sf = random_feasible_problem(rng);
  SolverSettings st;
  st.max_iters = 1;
  const SolverResult res = solve(sf, st);
  CHECK(res.status == SolveStatus::max_iterations);
}
