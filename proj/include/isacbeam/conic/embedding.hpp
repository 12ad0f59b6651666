// SPDX-License-Identifier: Apache-2.0
//
// Real embedding of complex Hermitian matrices, plus the vectorizations used
// by the conic standard form:
//   hvec  -- N^2 real parameters of an N x N Hermitian matrix, orthonormal in
//            the sense hvec(A).dot(hvec(B)) = Re tr(A^H B)
//   svec  -- m(m+1)/2 scaled vectorization of a real symmetric matrix with
//            sqrt(2) off-diagonals, so svec(A).dot(svec(B)) = tr(A B)
//   embed -- X -> [[Re X, -Im X], [Im X, Re X]], PSD iff X is PSD, each
//            eigenvalue of X appearing twice.

#pragma once

#include "isacbeam/types.hpp"

namespace isacbeam::conic {

inline int hvec_dim(int n) { return n * n; }
inline int svec_dim(int m) { return m * (m + 1) / 2; }

RVector hvec(const CMatrix& x);
CMatrix hvec_to_matrix(const RVector& v, int n);

RVector svec(const RMatrix& x);
RMatrix svec_to_matrix(const RVector& v, int m);

/// 2N x 2N symmetric embedding. Throws std::invalid_argument if x deviates
/// from Hermitian by more than 1e-10 (relative to its largest entry).
RMatrix embed_hermitian(const CMatrix& x);

/// Inverse of embed_hermitian with repair: the nearest block-consistent
/// Hermitian matrix is returned and the relative deviation of the input from
/// its exact embedding is written to *deviation when non-null. Deviations
/// beyond eps_blk throw NumericalError (the point is not complex-representable).
CMatrix extract_hermitian(const RMatrix& embedding, double* deviation = nullptr,
                          double eps_blk = 1e-7);

/// Matrix of the linear map hvec(X) -> svec(embed(X)); size svec_dim(2n) x n^2.
RMatrix embedding_operator(int n);

}  // namespace isacbeam::conic
