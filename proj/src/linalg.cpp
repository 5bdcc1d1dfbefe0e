#include "itsqp/linalg.hpp"

#include <algorithm>
#include <limits>

namespace itsqp {

double rank_tolerance(int rows, int cols, double sigma_max) {
  return std::max(rows, cols) * std::numeric_limits<double>::epsilon() *
         sigma_max;
}

JacobianFactorization::JacobianFactorization(const Matrix& J)
    : rows_(static_cast<int>(J.rows())), cols_(static_cast<int>(J.cols())) {
  Eigen::BDCSVD<Matrix> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
  singular_values_ = svd.singularValues();
  U_ = svd.matrixU();
  V_ = svd.matrixV();
  const double sigma_max =
      singular_values_.size() > 0 ? singular_values_[0] : 0.0;
  tolerance_ = rank_tolerance(rows_, cols_, sigma_max);
  rank_ = 0;
  for (Eigen::Index i = 0; i < singular_values_.size(); ++i)
    if (singular_values_[i] > tolerance_) ++rank_;
}

double JacobianFactorization::largest_singular_value() const {
  return singular_values_.size() > 0 ? singular_values_[0] : 0.0;
}

double JacobianFactorization::smallest_nonzero_singular_value() const {
  return rank_ > 0 ? singular_values_[rank_ - 1] : 0.0;
}

Matrix JacobianFactorization::null_basis() const {
  return V_.rightCols(cols_ - rank_);
}

Vector JacobianFactorization::project_row_space(const Vector& u) const {
  const auto Vr = V_.leftCols(rank_);
  return Vr * (Vr.transpose() * u);
}

Vector JacobianFactorization::transpose_pinv_apply(const Vector& b) const {
  // J^T = V S U^T, so (J^T)^+ = U S^+ V^T.
  Vector coeffs = V_.leftCols(rank_).transpose() * b;
  coeffs.array() /= singular_values_.head(rank_).array();
  return U_.leftCols(rank_) * coeffs;
}

Vector JacobianFactorization::pinv_apply(const Vector& r) const {
  Vector coeffs = U_.leftCols(rank_).transpose() * r;
  coeffs.array() /= singular_values_.head(rank_).array();
  return V_.leftCols(rank_) * coeffs;
}

}  // namespace itsqp
