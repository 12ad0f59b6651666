// SPDX-License-Identifier: Apache-2.0
//
// Cone-wise primitives for the interior-point solver: Nesterov-Todd scalings,
// Jordan-algebra products, steps to the boundary. Vectors follow the layout
// [orthant | SOC blocks | svec PSD blocks] of ConeDims.

#pragma once

#include "isacbeam/conic/standard_form.hpp"
#include "isacbeam/types.hpp"

namespace isacbeam::conic::detail {

struct SocScaling {
  double eta = 1.0;   // ratio of the J-norms of s and z
  RVector wbar;       // unit hyperbolic vector, wbar' J wbar = 1
};

struct PsdScaling {
  RMatrix r;      // W(Z) = R' Z R
  RMatrix r_inv;  // W^{-T}(S) = R^{-1} S R^{-T}
  RVector lam;    // diagonal of the scaled point
};

struct Scaling {
  RVector w_l;       // sqrt(s ./ z) on the orthant
  std::vector<SocScaling> q;
  std::vector<PsdScaling> s;
  RVector lambda;    // scaled point, lambda = W z = W^{-T} s
};

class ConeOps {
 public:
  explicit ConeOps(ConeDims dims);

  const ConeDims& dims() const { return dims_; }
  int dim() const { return total_; }
  int degree() const { return degree_; }

  /// Identity element e of the cone product.
  RVector identity() const;

  /// Smallest spectral value per the Jordan algebra (componentwise for the
  /// orthant, s0 - |s1| for SOCs, lambda_min for PSD blocks).
  double min_eig(const RVector& u) const;

  /// sup { alpha >= 0 : u + alpha du in K } for u strictly interior
  /// (infinity when the ray never leaves the cone).
  double max_step(const RVector& u, const RVector& du) const;

  /// NT scaling of a strictly interior pair; false when the factorizations
  /// detect a point on or outside the boundary.
  bool compute_scaling(const RVector& s, const RVector& z, Scaling& out) const;

  RVector apply_w(const Scaling& sc, const RVector& u) const;        // W u
  RVector apply_wt(const Scaling& sc, const RVector& u) const;       // W' u
  RVector apply_winv(const Scaling& sc, const RVector& u) const;     // W^{-1} u
  RVector apply_winvt(const Scaling& sc, const RVector& u) const;    // W^{-T} u

  /// Jordan product u o v.
  RVector jordan_product(const RVector& u, const RVector& v) const;
  /// Solves lambda o x = d for the scaled point of sc.
  RVector jordan_solve(const Scaling& sc, const RVector& d) const;
  /// lambda o lambda.
  RVector lambda_square(const Scaling& sc) const;

 private:
  template <class F>
  void for_socs(F&& f) const;  // f(block_index, offset, size)
  template <class F>
  void for_psds(F&& f) const;  // f(block_index, offset, matrix_dim)

  ConeDims dims_;
  std::vector<int> q_offsets_;
  std::vector<int> s_offsets_;
  int total_ = 0;
  int degree_ = 0;
};

}  // namespace isacbeam::conic::detail
