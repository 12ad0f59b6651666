// SPDX-License-Identifier: Apache-2.0

#include "isacbeam/conic/embedding.hpp"

#include <cmath>

namespace isacbeam::conic {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

RVector hvec(const CMatrix& x) {
  const int n = static_cast<int>(x.rows());
  RVector v(hvec_dim(n));
  int idx = 0;
  for (int i = 0; i < n; ++i) v(idx++) = x(i, i).real();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      v(idx++) = kSqrt2 * x(i, j).real();
      v(idx++) = kSqrt2 * x(i, j).imag();
    }
  }
  return v;
}

CMatrix hvec_to_matrix(const RVector& v, int n) {
  CMatrix x(n, n);
  int idx = 0;
  for (int i = 0; i < n; ++i) x(i, i) = v(idx++);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      const double re = v(idx++) / kSqrt2;
      const double im = v(idx++) / kSqrt2;
      x(i, j) = Complex(re, im);
      x(j, i) = Complex(re, -im);
    }
  }
  return x;
}

RVector svec(const RMatrix& x) {
  const int m = static_cast<int>(x.rows());
  RVector v(svec_dim(m));
  int idx = 0;
  for (int j = 0; j < m; ++j) {
    v(idx++) = x(j, j);
    for (int i = j + 1; i < m; ++i) v(idx++) = kSqrt2 * x(i, j);
  }
  return v;
}

RMatrix svec_to_matrix(const RVector& v, int m) {
  RMatrix x(m, m);
  int idx = 0;
  for (int j = 0; j < m; ++j) {
    x(j, j) = v(idx++);
    for (int i = j + 1; i < m; ++i) {
      const double e = v(idx++) / kSqrt2;
      x(i, j) = e;
      x(j, i) = e;
    }
  }
  return x;
}

RMatrix embed_hermitian(const CMatrix& x) {
  const int n = static_cast<int>(x.rows());
  if (x.cols() != n) throw std::invalid_argument("embed_hermitian: matrix must be square");
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  const double herm_dev = (x - x.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > 1e-10 * scale)
    throw std::invalid_argument("embed_hermitian: input is not Hermitian");
  RMatrix e(2 * n, 2 * n);
  const RMatrix re = x.real();
  const RMatrix im = x.imag();
  e.topLeftCorner(n, n) = re;
  e.bottomRightCorner(n, n) = re;
  e.topRightCorner(n, n) = -im;
  e.bottomLeftCorner(n, n) = im;
  // exact symmetry despite rounding in the Hermitian input
  e = 0.5 * (e + e.transpose()).eval();
  return e;
}

CMatrix extract_hermitian(const RMatrix& embedding, double* deviation, double eps_blk) {
  const int d = static_cast<int>(embedding.rows());
  if (embedding.cols() != d || d % 2 != 0)
    throw std::invalid_argument("extract_hermitian: embedding must be square with even size");
  const int n = d / 2;
  const RMatrix m11 = embedding.topLeftCorner(n, n);
  const RMatrix m22 = embedding.bottomRightCorner(n, n);
  const RMatrix m21 = embedding.bottomLeftCorner(n, n);
  const RMatrix m12 = embedding.topRightCorner(n, n);

  RMatrix re = 0.25 * (m11 + m11.transpose() + m22 + m22.transpose());
  RMatrix im_raw = 0.5 * (m21 - m12);
  RMatrix im = 0.5 * (im_raw - im_raw.transpose());
  CMatrix x = re.cast<Complex>() + Complex(0, 1) * im.cast<Complex>();

  RMatrix exact(d, d);
  exact.topLeftCorner(n, n) = re;
  exact.bottomRightCorner(n, n) = re;
  exact.topRightCorner(n, n) = -im;
  exact.bottomLeftCorner(n, n) = im;
  const double scale = std::max(1.0, embedding.cwiseAbs().maxCoeff());
  const double dev = (embedding - exact).cwiseAbs().maxCoeff() / scale;
  if (deviation != nullptr) *deviation = dev;
  if (dev > eps_blk)
    throw NumericalError("extract_hermitian: block structure violated beyond tolerance");
  return x;
}

RMatrix embedding_operator(int n) {
  RMatrix op(svec_dim(2 * n), hvec_dim(n));
  CMatrix basis = CMatrix::Zero(n, n);
  RVector unit = RVector::Zero(hvec_dim(n));
  for (int d = 0; d < hvec_dim(n); ++d) {
    unit(d) = 1.0;
    basis = hvec_to_matrix(unit, n);
    op.col(d) = svec(embed_hermitian(basis));
    unit(d) = 0.0;
  }
  return op;
}

}  // namespace isacbeam::conic
