// SPDX-License-Identifier: Apache-2.0

#include "cone_ops.hpp"

#include "isacbeam/conic/embedding.hpp"

#include <cmath>
#include <limits>

namespace isacbeam::conic::detail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ConeOps::ConeOps(ConeDims dims) : dims_(std::move(dims)) {
  int ofs = dims_.l;
  for (int qd : dims_.q) {
    if (qd < 2) throw std::invalid_argument("ConeOps: SOC dimension must be >= 2");
    q_offsets_.push_back(ofs);
    ofs += qd;
  }
  for (int sd : dims_.s) {
    if (sd < 1) throw std::invalid_argument("ConeOps: PSD dimension must be >= 1");
    s_offsets_.push_back(ofs);
    ofs += svec_dim(sd);
  }
  total_ = ofs;
  degree_ = dims_.degree();
}

template <class F>
void ConeOps::for_socs(F&& f) const {
  for (size_t k = 0; k < dims_.q.size(); ++k) {
    f(static_cast<int>(k), q_offsets_[k], dims_.q[k]);
  }
}

template <class F>
void ConeOps::for_psds(F&& f) const {
  for (size_t k = 0; k < dims_.s.size(); ++k) {
    f(static_cast<int>(k), s_offsets_[k], dims_.s[k]);
  }
}

RVector ConeOps::identity() const {
  RVector e = RVector::Zero(total_);
  e.head(dims_.l).setOnes();
  for_socs([&](int, int ofs, int) { e(ofs) = 1.0; });
  for_psds([&](int, int ofs, int m) {
    e.segment(ofs, svec_dim(m)) = svec(RMatrix::Identity(m, m));
  });
  return e;
}

double ConeOps::min_eig(const RVector& u) const {
  double me = kInf;
  if (dims_.l > 0) me = std::min(me, u.head(dims_.l).minCoeff());
  for_socs([&](int, int ofs, int qd) {
    me = std::min(me, u(ofs) - u.segment(ofs + 1, qd - 1).norm());
  });
  for_psds([&](int, int ofs, int m) {
    const RMatrix x = svec_to_matrix(u.segment(ofs, svec_dim(m)), m);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(x, Eigen::EigenvaluesOnly);
    me = std::min(me, es.eigenvalues().minCoeff());
  });
  return me;
}

namespace {

// largest alpha >= 0 with (u0 + a d0) >= |u1 + a d1| for a in [0, alpha]
double soc_max_step(double u0, const RVector& u1, double d0, const RVector& d1) {
  const double a = d0 * d0 - d1.squaredNorm();
  const double b = 2.0 * (u0 * d0 - u1.dot(d1));
  const double c = u0 * u0 - u1.squaredNorm();
  // f(alpha) = a alpha^2 + b alpha + c, f(0) = c > 0 for interior u
  if (std::abs(a) < 1e-300) {
    if (b >= 0.0) return kInf;
    return -c / b;
  }
  const double disc = b * b - 4.0 * a * c;
  if (a > 0.0) {
    if (disc < 0.0 || b >= 0.0) return kInf;
    // both roots positive; smallest is the boundary hit
    return (-b - std::sqrt(disc)) / (2.0 * a);
  }
  // a < 0: exactly one positive root
  const double sd = std::sqrt(std::max(disc, 0.0));
  const double r = (-b - sd) / (2.0 * a);
  return std::max(r, 0.0);
}

}  // namespace

double ConeOps::max_step(const RVector& u, const RVector& du) const {
  double step = kInf;
  for (int i = 0; i < dims_.l; ++i) {
    if (du(i) < 0.0) step = std::min(step, -u(i) / du(i));
  }
  for_socs([&](int, int ofs, int qd) {
    step = std::min(step, soc_max_step(u(ofs), u.segment(ofs + 1, qd - 1), du(ofs),
                                       du.segment(ofs + 1, qd - 1)));
  });
  for_psds([&](int, int ofs, int m) {
    const RMatrix x = svec_to_matrix(u.segment(ofs, svec_dim(m)), m);
    const RMatrix d = svec_to_matrix(du.segment(ofs, svec_dim(m)), m);
    Eigen::LLT<RMatrix> llt(x);
    if (llt.info() != Eigen::Success) {
      step = 0.0;
      return;
    }
    const RMatrix li = llt.matrixL().solve(RMatrix::Identity(m, m));
    const RMatrix bmat = li * d * li.transpose();
    Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (bmat + bmat.transpose()),
                                              Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    if (lmin < 0.0) step = std::min(step, -1.0 / lmin);
  });
  return step;
}

bool ConeOps::compute_scaling(const RVector& s, const RVector& z, Scaling& out) const {
  out.w_l.resize(dims_.l);
  out.q.assign(dims_.q.size(), SocScaling{});
  out.s.assign(dims_.s.size(), PsdScaling{});
  out.lambda.resize(total_);

  for (int i = 0; i < dims_.l; ++i) {
    if (s(i) <= 0.0 || z(i) <= 0.0) return false;
    out.w_l(i) = std::sqrt(s(i) / z(i));
    out.lambda(i) = std::sqrt(s(i) * z(i));
  }

  bool ok = true;
  for_socs([&](int k, int ofs, int qd) {
    const RVector sb = s.segment(ofs, qd);
    const RVector zb = z.segment(ofs, qd);
    const double snorm2 = sb(0) * sb(0) - sb.tail(qd - 1).squaredNorm();
    const double znorm2 = zb(0) * zb(0) - zb.tail(qd - 1).squaredNorm();
    if (snorm2 <= 0.0 || znorm2 <= 0.0 || sb(0) <= 0.0 || zb(0) <= 0.0) {
      ok = false;
      return;
    }
    const double snorm = std::sqrt(snorm2);
    const double znorm = std::sqrt(znorm2);
    const RVector sbar = sb / snorm;
    const RVector zbar = zb / znorm;
    const double gamma = std::sqrt((1.0 + sbar.dot(zbar)) / 2.0);
    SocScaling& sc = out.q[static_cast<size_t>(k)];
    sc.eta = snorm / znorm;
    sc.wbar.resize(qd);
    sc.wbar(0) = (sbar(0) + zbar(0)) / (2.0 * gamma);
    sc.wbar.tail(qd - 1) =
        (sbar.tail(qd - 1) - zbar.tail(qd - 1)) / (2.0 * gamma);
  });
  if (!ok) return false;

  for_psds([&](int k, int ofs, int m) {
    const RMatrix smat = svec_to_matrix(s.segment(ofs, svec_dim(m)), m);
    const RMatrix zmat = svec_to_matrix(z.segment(ofs, svec_dim(m)), m);
    Eigen::LLT<RMatrix> lls(smat);
    Eigen::LLT<RMatrix> llz(zmat);
    if (lls.info() != Eigen::Success || llz.info() != Eigen::Success) {
      ok = false;
      return;
    }
    const RMatrix ls = lls.matrixL();
    const RMatrix lz = llz.matrixL();
    Eigen::JacobiSVD<RMatrix> svd(lz.transpose() * ls,
                                  Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RVector sig = svd.singularValues();
    if (sig.minCoeff() <= 0.0) {
      ok = false;
      return;
    }
    PsdScaling& sc = out.s[static_cast<size_t>(k)];
    const RVector sig_isqrt = sig.array().sqrt().inverse();
    sc.r = ls * svd.matrixV() * sig_isqrt.asDiagonal();
    // R^{-1} = Sigma^{1/2} V' Ls^{-1}
    const RMatrix ls_inv =
        ls.triangularView<Eigen::Lower>().solve(RMatrix::Identity(m, m));
    sc.r_inv = sig.array().sqrt().matrix().asDiagonal() * svd.matrixV().transpose() * ls_inv;
    sc.lam = sig;
  });
  if (!ok) return false;

  // lambda on the SOC and PSD segments
  for_socs([&](int k, int ofs, int qd) {
    const SocScaling& sc = out.q[static_cast<size_t>(k)];
    const RVector zb = z.segment(ofs, qd);
    const double se = std::sqrt(sc.eta);
    const double cross = sc.wbar.tail(qd - 1).dot(zb.tail(qd - 1));
    out.lambda(ofs) = se * (sc.wbar(0) * zb(0) + cross);
    out.lambda.segment(ofs + 1, qd - 1) =
        se * (zb.tail(qd - 1) +
              (zb(0) + cross / (1.0 + sc.wbar(0))) * sc.wbar.tail(qd - 1));
  });
  for_psds([&](int k, int ofs, int m) {
    out.lambda.segment(ofs, svec_dim(m)) =
        svec(RMatrix(out.s[static_cast<size_t>(k)].lam.asDiagonal()));
  });
  return true;
}

namespace {

// H(wbar) u with H = [[w0, w1'], [w1, I + w1 w1'/(1+w0)]]
RVector soc_h_apply(const RVector& wbar, const RVector& u) {
  const int qd = static_cast<int>(u.size());
  RVector r(qd);
  const double w0 = wbar(0);
  const auto w1 = wbar.tail(qd - 1);
  const auto u1 = u.tail(qd - 1);
  const double cross = w1.dot(u1);
  r(0) = w0 * u(0) + cross;
  r.tail(qd - 1) = u1 + (u(0) + cross / (1.0 + w0)) * w1;
  return r;
}

// H(J wbar) u, the inverse scaling direction
RVector soc_h_apply_neg(const RVector& wbar, const RVector& u) {
  RVector jw = wbar;
  jw.tail(jw.size() - 1) *= -1.0;
  return soc_h_apply(jw, u);
}

}  // namespace

RVector ConeOps::apply_w(const Scaling& sc, const RVector& u) const {
  RVector r(total_);
  r.head(dims_.l) = sc.w_l.cwiseProduct(u.head(dims_.l));
  for_socs([&](int k, int ofs, int qd) {
    const SocScaling& b = sc.q[static_cast<size_t>(k)];
    r.segment(ofs, qd) = std::sqrt(b.eta) * soc_h_apply(b.wbar, u.segment(ofs, qd));
  });
  for_psds([&](int k, int ofs, int m) {
    const PsdScaling& b = sc.s[static_cast<size_t>(k)];
    const RMatrix x = svec_to_matrix(u.segment(ofs, svec_dim(m)), m);
    r.segment(ofs, svec_dim(m)) = svec(b.r.transpose() * x * b.r);
  });
  return r;
}

RVector ConeOps::apply_wt(const Scaling& sc, const RVector& u) const {
  RVector r(total_);
  r.head(dims_.l) = sc.w_l.cwiseProduct(u.head(dims_.l));
  for_socs([&](int k, int ofs, int qd) {
    const SocScaling& b = sc.q[static_cast<size_t>(k)];
    r.segment(ofs, qd) = std::sqrt(b.eta) * soc_h_apply(b.wbar, u.segment(ofs, qd));
  });
  for_psds([&](int k, int ofs, int m) {
    const PsdScaling& b = sc.s[static_cast<size_t>(k)];
    const RMatrix x = svec_to_matrix(u.segment(ofs, svec_dim(m)), m);
    r.segment(ofs, svec_dim(m)) = svec(b.r * x * b.r.transpose());
  });
  return r;
}

RVector ConeOps::apply_winv(const Scaling& sc, const RVector& u) const {
  RVector r(total_);
  r.head(dims_.l) = u.head(dims_.l).cwiseQuotient(sc.w_l);
  for_socs([&](int k, int ofs, int qd) {
    const SocScaling& b = sc.q[static_cast<size_t>(k)];
    r.segment(ofs, qd) =
        (1.0 / std::sqrt(b.eta)) * soc_h_apply_neg(b.wbar, u.segment(ofs, qd));
  });
  for_psds([&](int k, int ofs, int m) {
    const PsdScaling& b = sc.s[static_cast<size_t>(k)];
    const RMatrix x = svec_to_matrix(u.segment(ofs, svec_dim(m)), m);
    r.segment(ofs, svec_dim(m)) = svec(b.r_inv.transpose() * x * b.r_inv);
  });
  return r;
}

RVector ConeOps::apply_winvt(const Scaling& sc, const RVector& u) const {
  RVector r(total_);
  r.head(dims_.l) = u.head(dims_.l).cwiseQuotient(sc.w_l);
  for_socs([&](int k, int ofs, int qd) {
    const SocScaling& b = sc.q[static_cast<size_t>(k)];
    r.segment(ofs, qd) =
        (1.0 / std::sqrt(b.eta)) * soc_h_apply_neg(b.wbar, u.segment(ofs, qd));
  });
  for_psds([&](int k, int ofs, int m) {
    const PsdScaling& b = sc.s[static_cast<size_t>(k)];
    const RMatrix x = svec_to_matrix(u.segment(ofs, svec_dim(m)), m);
    r.segment(ofs, svec_dim(m)) = svec(b.r_inv * x * b.r_inv.transpose());
  });
  return r;
}

RVector ConeOps::jordan_product(const RVector& u, const RVector& v) const {
  RVector r(total_);
  r.head(dims_.l) = u.head(dims_.l).cwiseProduct(v.head(dims_.l));
  for_socs([&](int, int ofs, int qd) {
    const auto ub = u.segment(ofs, qd);
    const auto vb = v.segment(ofs, qd);
    r(ofs) = ub.dot(vb);
    r.segment(ofs + 1, qd - 1) =
        ub(0) * vb.tail(qd - 1) + vb(0) * ub.tail(qd - 1);
  });
  for_psds([&](int, int ofs, int m) {
    const RMatrix x = svec_to_matrix(u.segment(ofs, svec_dim(m)), m);
    const RMatrix y = svec_to_matrix(v.segment(ofs, svec_dim(m)), m);
    r.segment(ofs, svec_dim(m)) = svec(0.5 * (x * y + y * x));
  });
  return r;
}

RVector ConeOps::jordan_solve(const Scaling& sc, const RVector& d) const {
  RVector r(total_);
  r.head(dims_.l) = d.head(dims_.l).cwiseQuotient(sc.lambda.head(dims_.l));
  for_socs([&](int, int ofs, int qd) {
    const auto lb = sc.lambda.segment(ofs, qd);
    const auto db = d.segment(ofs, qd);
    const double l0 = lb(0);
    const auto l1 = lb.tail(qd - 1);
    const double det = l0 * l0 - l1.squaredNorm();
    const double v0 = (l0 * db(0) - l1.dot(db.tail(qd - 1))) / det;
    r(ofs) = v0;
    r.segment(ofs + 1, qd - 1) = (db.tail(qd - 1) - v0 * l1) / l0;
  });
  for_psds([&](int k, int ofs, int m) {
    const RVector& lam = sc.s[static_cast<size_t>(k)].lam;
    const RMatrix dm = svec_to_matrix(d.segment(ofs, svec_dim(m)), m);
    RMatrix v(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) v(i, j) = 2.0 * dm(i, j) / (lam(i) + lam(j));
    }
    r.segment(ofs, svec_dim(m)) = svec(v);
  });
  return r;
}

RVector ConeOps::lambda_square(const Scaling& sc) const {
  return jordan_product(sc.lambda, sc.lambda);
}

}  // namespace isacbeam::conic::detail
