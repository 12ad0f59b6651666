// SPDX-License-Identifier: Apache-2.0

#include "isacbeam/conic/problem.hpp"

#include "isacbeam/conic/embedding.hpp"

namespace isacbeam::conic {

int ConicProblem::add_hermitian(int dim, std::string name) {
  if (frozen_) throw std::logic_error("ConicProblem: add variables before constraints");
  if (dim < 1) throw std::invalid_argument("ConicProblem: matrix dimension must be >= 1");
  matrix_dims_.push_back(dim);
  matrix_offsets_.push_back(n_vars_);
  names_.push_back(std::move(name));
  n_vars_ += hvec_dim(dim);
  return static_cast<int>(matrix_dims_.size()) - 1;
}

int ConicProblem::add_scalar(std::string name, bool nonneg) {
  if (frozen_) throw std::logic_error("ConicProblem: add variables before constraints");
  scalar_offsets_.push_back(n_vars_);
  names_.push_back(std::move(name));
  const int id = static_cast<int>(scalar_offsets_.size()) - 1;
  if (nonneg) nonneg_scalars_.push_back(id);
  n_vars_ += 1;
  return id;
}

void ConicProblem::accum_quad_form(RVector& expr, int var, const CVector& a, double mult) const {
  accum_inner(expr, var, a * a.adjoint(), mult);
}

void ConicProblem::accum_inner(RVector& expr, int var, const CMatrix& c, double mult) const {
  const int dim = matrix_dim(var);
  expr.segment(matrix_offset(var), hvec_dim(dim)) += mult * hvec(c);
}

void ConicProblem::accum_trace(RVector& expr, int var, double mult) const {
  const int dim = matrix_dim(var);
  // diagonal entries come first in hvec order
  expr.segment(matrix_offset(var), dim).array() += mult;
}

void ConicProblem::accum_scalar(RVector& expr, int scalar_var, double mult) const {
  expr(scalar_offset(scalar_var)) += mult;
}

void ConicProblem::add_equality(const RVector& expr, double rhs) {
  frozen_ = true;
  eq_rows_.push_back(expr);
  eq_rhs_.push_back(rhs);
}

void ConicProblem::add_inequality(const RVector& expr, double rhs) {
  frozen_ = true;
  ineq_rows_.push_back(expr);
  ineq_rhs_.push_back(rhs);
}

void ConicProblem::add_soc_row(const RVector& expr, double constant) {
  frozen_ = true;
  soc_rows_.push_back(expr);
  soc_consts_.push_back(constant);
}

void ConicProblem::set_soc_bound(int scalar_var) {
  frozen_ = true;
  soc_bound_var_ = scalar_var;
}

void ConicProblem::set_objective(const RVector& expr) {
  frozen_ = true;
  objective_ = expr;
}

void ConicProblem::set_objective_scalar(int scalar_var) {
  RVector c = zero_expr();
  accum_scalar(c, scalar_var, 1.0);
  set_objective(c);
}

StandardForm ConicProblem::compile() const {
  if (objective_.size() != n_vars_) throw std::logic_error("ConicProblem: objective not set");
  if (!soc_rows_.empty() && !soc_bound_var_.has_value())
    throw std::logic_error("ConicProblem: SOC rows present but no bound scalar");

  StandardForm sf;
  sf.c = objective_;

  const int p = n_equalities();
  sf.A.resize(p, n_vars_);
  sf.b.resize(p);
  for (int i = 0; i < p; ++i) {
    sf.A.row(i) = eq_rows_[static_cast<size_t>(i)].transpose();
    sf.b(i) = eq_rhs_[static_cast<size_t>(i)];
  }

  sf.dims.l = static_cast<int>(nonneg_scalars_.size()) + n_inequalities();
  if (!soc_rows_.empty()) sf.dims.q.push_back(soc_dim());
  for (int dim : matrix_dims_) sf.dims.s.push_back(2 * dim);

  const int m = sf.dims.dim();
  sf.G = RMatrix::Zero(m, n_vars_);
  sf.h = RVector::Zero(m);
  int row = 0;
  // s_l >= 0 rows: nonneg scalars (s = x) then inequalities (s = rhs - expr.x)
  for (int svar : nonneg_scalars_) {
    sf.G(row, scalar_offset(svar)) = -1.0;
    sf.h(row) = 0.0;
    ++row;
  }
  for (int i = 0; i < n_inequalities(); ++i) {
    sf.G.row(row) = ineq_rows_[static_cast<size_t>(i)].transpose();
    sf.h(row) = ineq_rhs_[static_cast<size_t>(i)];
    ++row;
  }
  // SOC block: s_0 = bound scalar, s_i = residual_i
  if (!soc_rows_.empty()) {
    sf.G(row, scalar_offset(*soc_bound_var_)) = -1.0;
    ++row;
    for (size_t i = 0; i < soc_rows_.size(); ++i) {
      sf.G.row(row) = -soc_rows_[i].transpose();
      sf.h(row) = soc_consts_[i];
      ++row;
    }
  }
  // PSD blocks: s_block = embed(X), i.e. G = -E, h = 0
  for (int v = 0; v < n_matrix_vars(); ++v) {
    const int dim = matrix_dims_[static_cast<size_t>(v)];
    const RMatrix e = embedding_operator(dim);
    sf.G.block(row, matrix_offset(v), e.rows(), e.cols()) = -e;
    row += static_cast<int>(e.rows());
  }
  return sf;
}

int ConicProblem::psd_slack_offset(int var) const {
  int ofs = static_cast<int>(nonneg_scalars_.size()) + n_inequalities() + soc_dim();
  for (int v = 0; v < var; ++v) {
    const int d = 2 * matrix_dims_.at(static_cast<size_t>(v));
    ofs += d * (d + 1) / 2;
  }
  return ofs;
}

CMatrix ConicProblem::matrix_value(int var, const RVector& x) const {
  const int dim = matrix_dim(var);
  return hvec_to_matrix(x.segment(matrix_offset(var), hvec_dim(dim)), dim);
}

double ConicProblem::scalar_value(int scalar_var, const RVector& x) const {
  return x(scalar_offset(scalar_var));
}

}  // namespace isacbeam::conic
