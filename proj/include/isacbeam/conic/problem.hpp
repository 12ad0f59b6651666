// SPDX-License-Identifier: Apache-2.0
//
// Structured conic problem over Hermitian PSD matrix variables and free
// scalars: linear equalities and inequalities, at most one second-order cone
// (the norm epigraph of the beampattern residual), and a linear objective.
// compile() lowers the Hermitian variables to real PSD blocks through the
// 2N x 2N embedding.

#pragma once

#include "isacbeam/conic/standard_form.hpp"
#include "isacbeam/types.hpp"

#include <optional>

namespace isacbeam::conic {

class ConicProblem {
 public:
  /// Hermitian PSD matrix variable of the given complex dimension.
  int add_hermitian(int dim, std::string name);
  /// Free scalar; nonneg adds a one-sided bound through the orthant cone.
  int add_scalar(std::string name, bool nonneg = false);

  int n_vars() const { return n_vars_; }
  int n_matrix_vars() const { return static_cast<int>(matrix_dims_.size()); }
  int matrix_dim(int var) const { return matrix_dims_.at(static_cast<size_t>(var)); }
  /// Size of the real PSD block carrying matrix variable `var` (2 * dim).
  int psd_block_dim(int var) const { return 2 * matrix_dim(var); }
  int n_equalities() const { return static_cast<int>(eq_rows_.size()); }
  int n_inequalities() const { return static_cast<int>(ineq_rows_.size()); }
  /// Cone dimension of the residual SOC (residual length + 1), 0 if unset.
  int soc_dim() const { return soc_rows_.empty() ? 0 : static_cast<int>(soc_rows_.size()) + 1; }
  /// Offset of matrix variable `var`'s PSD slack inside the compiled cone vector.
  int psd_slack_offset(int var) const;

  RVector zero_expr() const { return RVector::Zero(n_vars_); }

  /// expr += mult * a^H X a  (real for Hermitian X).
  void accum_quad_form(RVector& expr, int var, const CVector& a, double mult = 1.0) const;
  /// expr += mult * Re tr(C^H X) for Hermitian C.
  void accum_inner(RVector& expr, int var, const CMatrix& c, double mult = 1.0) const;
  /// expr += mult * tr(X).
  void accum_trace(RVector& expr, int var, double mult = 1.0) const;
  void accum_scalar(RVector& expr, int scalar_var, double mult = 1.0) const;

  void add_equality(const RVector& expr, double rhs);
  /// expr . x <= rhs
  void add_inequality(const RVector& expr, double rhs);
  /// Appends residual entry r = expr . x + constant to the SOC.
  void add_soc_row(const RVector& expr, double constant);
  /// Bounds the residual: ||r||_2 <= scalar_var.
  void set_soc_bound(int scalar_var);

  void set_objective(const RVector& expr);
  void set_objective_scalar(int scalar_var);

  StandardForm compile() const;

  /// Value recovery from a solver primal point.
  CMatrix matrix_value(int var, const RVector& x) const;
  double scalar_value(int scalar_var, const RVector& x) const;

 private:
  int matrix_offset(int var) const { return matrix_offsets_.at(static_cast<size_t>(var)); }
  int scalar_offset(int svar) const { return scalar_offsets_.at(static_cast<size_t>(svar)); }

  std::vector<int> matrix_dims_;
  std::vector<int> matrix_offsets_;
  std::vector<int> scalar_offsets_;
  std::vector<std::string> names_;
  std::vector<int> nonneg_scalars_;
  int n_vars_ = 0;
  bool frozen_ = false;  // set once any constraint exists; no more variables

  std::vector<RVector> eq_rows_;
  std::vector<double> eq_rhs_;
  std::vector<RVector> ineq_rows_;
  std::vector<double> ineq_rhs_;
  std::vector<RVector> soc_rows_;
  std::vector<double> soc_consts_;
  std::optional<int> soc_bound_var_;
  RVector objective_;
};

}  // namespace isacbeam::conic
