// SPDX-License-Identifier: Apache-2.0
//
// Standard conic form
//   minimize    c'x
//   subject to  A x = b
//               G x + s = h,   s in K
// with K = R+^l x SOC(q_1) x ... x PSD(s_1) x ...  (PSD blocks in svec
// coordinates). This is the contract between the problem compiler and the
// interior-point solver.

#pragma once

#include "isacbeam/types.hpp"

#include <numeric>

namespace isacbeam::conic {

struct ConeDims {
  int l = 0;               // nonnegative orthant
  std::vector<int> q;      // second-order cone sizes
  std::vector<int> s;      // PSD block matrix sizes (svec length s_i*(s_i+1)/2)

  int svec_total() const {
    int t = 0;
    for (int m : s) t += m * (m + 1) / 2;
    return t;
  }
  int dim() const { return l + std::accumulate(q.begin(), q.end(), 0) + svec_total(); }
  int degree() const {
    return l + static_cast<int>(q.size()) + std::accumulate(s.begin(), s.end(), 0);
  }
};

struct StandardForm {
  RVector c;
  RMatrix A;
  RVector b;
  RMatrix G;
  RVector h;
  ConeDims dims;

  int n_vars() const { return static_cast<int>(c.size()); }
  int n_eq() const { return static_cast<int>(A.rows()); }
};

}  // namespace isacbeam::conic
