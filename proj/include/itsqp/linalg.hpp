#pragma once

#include "itsqp/problem.hpp"

namespace itsqp {

/// Rank-revealing factorization of a constraint Jacobian J (m x n) via a full
/// SVD. Singular values at or below max(m, n) * eps * sigma_max count as zero.
class JacobianFactorization {
 public:
  explicit JacobianFactorization(const Matrix& J);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int rank() const { return rank_; }
  double tolerance() const { return tolerance_; }
  double largest_singular_value() const;
  /// Smallest singular value above the rank tolerance, or 0 if rank is 0.
  double smallest_nonzero_singular_value() const;

  /// Orthonormal basis of Null(J), n x (n - rank).
  Matrix null_basis() const;
  /// Orthogonal projection of u onto Range(J^T).
  Vector project_row_space(const Vector& u) const;
  /// (J^T)^+ b: minimum-norm least-squares solution y of J^T y = b.
  Vector transpose_pinv_apply(const Vector& b) const;
  /// J^+ r: minimum-norm least-squares solution u of J u = r.
  Vector pinv_apply(const Vector& r) const;

 private:
  int rows_;
  int cols_;
  int rank_ = 0;
  double tolerance_ = 0.0;
  Vector singular_values_;
  Matrix U_;  // m x m
  Matrix V_;  // n x n
};

/// Numerical rank tolerance used throughout: max(m, n) * eps * sigma_max.
double rank_tolerance(int rows, int cols, double sigma_max);

}  // namespace itsqp
