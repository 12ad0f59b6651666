// dev-only smoke driver, not part of the shipped build
#include "isacbeam/conic/problem.hpp"
#include "isacbeam/conic/solver.hpp"
#include "isacbeam/conic/embedding.hpp"
#include <cstdio>
#include <iostream>

using namespace isacbeam;
using namespace isacbeam::conic;

int main() {
  // 1) tiny LP: min x1+x2 s.t. x1+2x2 = 1, x >= 0  -> opt at x=(0,0.5), val 0.5
  {
    StandardForm sf;
    sf.c = RVector(2); sf.c << 1, 1;
    sf.A = RMatrix(1,2); sf.A << 1, 2;
    sf.b = RVector(1); sf.b << 1;
    sf.G = -RMatrix::Identity(2,2);
    sf.h = RVector::Zero(2);
    sf.dims.l = 2;
    auto r = solve(sf);
    std::printf("LP: status=%s obj=%.10f x=(%.8f, %.8f) iters=%d\n",
      to_string(r.status).c_str(), r.objective, r.x(0), r.x(1), r.iterations);
  }
  // 2) SOCP: min -x2 s.t. ||x2|| <= 1 via SOC(2) on (s0,s1)=(1, x2)... use: min c'x with G
  //    minimize -t s.t. ||(u)|| <= t, u = 0.3 fixed via equality; expect t=0.3
  {
    StandardForm sf;
    sf.c = RVector(2); sf.c << 1, 0;  // x=(t,u): min t
    sf.A = RMatrix(1,2); sf.A << 0, 1; sf.b = RVector(1); sf.b << 0.3;
    sf.G = RMatrix(2,2); sf.G << -1,0, 0,-1;  // s = (t, u)
    sf.h = RVector::Zero(2);
    sf.dims.q = {2};
    auto r = solve(sf);
    std::printf("SOCP: status=%s obj=%.10f (expect 0.3) iters=%d\n",
      to_string(r.status).c_str(), r.objective, r.iterations);
  }
  // 3) SDP: min tr(X) s.t. X >= A (i.e. X - A PSD), X sym 2x2. opt: X = PSD part of A.
  //    A = [[1, 2],[2, -3]] eigs: (1-(-3))/2 ... compute exactly below.
  {
    // variable x = svec(X) (3 dims for 2x2), cone: s = svec(X - A) PSD
    StandardForm sf;
    sf.c = RVector(3); sf.c << 1, 0, 1;  // trace in svec coords (diag entries at 0 and 2)
    sf.A = RMatrix(0,3); sf.b = RVector(0);
    sf.G = -RMatrix::Identity(3,3);
    RMatrix amat(2,2); amat << 1, 2, 2, -3;
    sf.h = -svec(amat);
    sf.dims.s = {2};
    auto r = solve(sf);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(amat);
    double expect = es.eigenvalues().cwiseMax(0.0).sum();
    std::printf("SDP: status=%s obj=%.10f expect=%.10f iters=%d\n",
      to_string(r.status).c_str(), r.objective, expect, r.iterations);
  }
  // 4) infeasible LP: x >= 0, x <= -1
  {
    StandardForm sf;
    sf.c = RVector(1); sf.c << 0;
    sf.A = RMatrix(0,1); sf.b = RVector(0);
    sf.G = RMatrix(2,1); sf.G << -1, 1;
    sf.h = RVector(2); sf.h << 0, -1;
    sf.dims.l = 2;
    auto r = solve(sf);
    std::printf("INFEAS: status=%s iters=%d\n", to_string(r.status).c_str(), r.iterations);
  }
  // 5) Hermitian SDP via ConicProblem: min tr(X) s.t. a^H X a >= 1, X psd (complex 2x2)
  //    opt X = a a^H / ||a||^4 * ... min trace with quad form >= 1: X = aa^H/||a||^2 /||a||^2 *1
  {
    ConicProblem cp;
    int X = cp.add_hermitian(2, "X");
    CVector a(2); a << Complex(1,1), Complex(0,2);
    RVector row = cp.zero_expr();
    cp.accum_quad_form(row, X, a, -1.0);
    cp.add_inequality(row, -1.0);             // -a^H X a <= -1
    RVector obj = cp.zero_expr();
    cp.accum_trace(obj, X, 1.0);
    cp.set_objective(obj);
    auto sf = cp.compile();
    auto r = solve(sf);
    double expect = 1.0 / a.squaredNorm();    // min trace = 1/||a||^2
    CMatrix xv = cp.matrix_value(X, r.x);
    std::printf("HERM-SDP: status=%s obj=%.10f expect=%.10f quad=%.8f iters=%d\n",
      to_string(r.status).c_str(), r.objective, expect,
      std::real(Complex(a.adjoint()*xv*a)), r.iterations);
  }
  return 0;
}
