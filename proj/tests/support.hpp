#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's linear algebra: projections use JacobiSVD, saddle systems use
// a complete orthogonal decomposition of the assembled KKT matrix, and the
// Cauchy stepsize comes from a bisection line search.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace testing_support {

using Eigen::MatrixXd;
using Eigen::VectorXd;

class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : engine_(seed) {}

  double operator()() { return normal_(engine_); }
  int integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  MatrixXd matrix(int rows, int cols) {
    MatrixXd A(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) A(i, j) = (*this)();
    return A;
  }
  VectorXd vector(int n) { return matrix(n, 1).col(0); }
  // m x n Gaussian product with exact rank r (r = 0 gives the zero matrix).
  MatrixXd ranked(int m, int n, int r) {
    if (r == 0) return MatrixXd::Zero(m, n);
    return matrix(m, r) * matrix(r, n);
  }
  MatrixXd spd(int n) {
    MatrixXd A = matrix(n, n);
    return A * A.transpose() / n + 0.5 * MatrixXd::Identity(n, n);
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Orthogonal projector onto Range(J^T) from a two-sided Jacobi SVD.
inline MatrixXd row_space_projector(const MatrixXd& J) {
  const int n = static_cast<int>(J.cols());
  if (J.rows() == 0) return MatrixXd::Zero(n, n);
  Eigen::JacobiSVD<MatrixXd> svd(J, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  const double tol = std::max(J.rows(), J.cols()) *
                     std::numeric_limits<double>::epsilon() * smax;
  int r = 0;
  while (r < s.size() && s(r) > tol) ++r;
  const MatrixXd V = svd.matrixV().leftCols(r);
  return V * V.transpose();
}

// argmin_{0 <= a <= omega} 1/2 |c - a J J^T c|^2 by bisection on the sign of
// the derivative, evaluated by direct substitution.
inline double cauchy_alpha_search(const MatrixXd& J, const VectorXd& c,
                                  double omega) {
  const VectorXd Jg = -J * (J.transpose() * c);
  const auto slope = [&](double a) { return Jg.dot(c + a * Jg); };
  if (slope(omega) <= 0.0) return omega;
  double lo = 0.0, hi = omega;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (slope(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct SaddleSolution {
  VectorXd u;
  VectorXd y;
};

// Minimum-norm solution of [H J^T; J 0] [u; y] = -[g + H v; 0], assembled
// densely and solved with a complete orthogonal decomposition.
inline SaddleSolution brute_force_saddle(const MatrixXd& H, const MatrixXd& J,
                                         const VectorXd& g, const VectorXd& v) {
  const auto n = J.cols(), m = J.rows();
  MatrixXd K = MatrixXd::Zero(n + m, n + m);
  K.topLeftCorner(n, n) = H;
  K.topRightCorner(n, m) = J.transpose();
  K.bottomLeftCorner(m, n) = J;
  VectorXd rhs = VectorXd::Zero(n + m);
  rhs.head(n) = -(g + H * v);
  Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(K);
  cod.setThreshold(1e-10);
  const VectorXd sol = cod.solve(rhs);
  return {sol.head(n), sol.tail(m)};
}

}  // namespace testing_support
