#pragma once

#include "itsqp/linalg.hpp"
#include "itsqp/problem.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace itsqp {

/// Input for which a quantity is undefined, e.g. the Cauchy stepsize when
/// J^T c = 0.
class DegenerateInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The reduced Hessian Z^T H Z is not numerically positive definite.
class CurvatureError : public std::runtime_error {
 public:
  CurvatureError(const std::string& what, double smallest_eigenvalue)
      : std::runtime_error(what), smallest_eigenvalue_(smallest_eigenvalue) {}
  double smallest_eigenvalue() const { return smallest_eigenvalue_; }

 private:
  double smallest_eigenvalue_;
};

/// An iterative solve produced a non-finite iterate.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Choice of H_k in the tangential subproblem.
class HessianStrategy {
 public:
  enum class Kind { identity, supplied };

  /// H = I, null-space curvature bound zeta = 1.
  static HessianStrategy identity();
  /// User-supplied symmetric H (checked to 1e-12) with asserted curvature
  /// bound zeta on Null(J).
  static HessianStrategy supplied(Matrix H, double zeta);

  Kind kind() const { return kind_; }
  double zeta() const { return zeta_; }
  /// Dense H for dimension n.
  Matrix matrix(int n) const;
  Vector apply(const Vector& u) const;

 private:
  HessianStrategy() = default;
  Kind kind_ = Kind::identity;
  double zeta_ = 1.0;
  Matrix H_;
};

/// Smallest eigenvalue accepted for Z^T H Z.
inline constexpr double kMinReducedCurvature = 1e-10;

struct NormalStepResult {
  Vector v;
  double model_reduction = 0.0;   // |c| - |c + J v|
  double cauchy_reduction = 0.0;  // |c| - |c + alpha_C J v_C|
  double alpha_cauchy = 0.0;
  int inner_iterations = 0;
  bool hit_boundary = false;
  bool cauchy_fallback = false;  // truncated CG failed the certificate
};

enum class TangentialMode { exact, iterative };

struct TangentialStepResult {
  Vector u;
  Vector y;
  Vector rho;  // H u + J^T y + (g + H v)
  Vector r;    // J u
  TangentialMode mode = TangentialMode::exact;
  int inner_iterations = 0;
  bool exact_fallback = false;  // iterative cap reached, exact solve returned
};

/// Residual pair (rho, r) of a candidate (u, y) for the tangential Newton
/// system with right-hand side g + H v.
std::pair<Vector, Vector> saddle_residual(const HessianStrategy& H,
                                          const Matrix& J, const Vector& g,
                                          const Vector& v, const Vector& u,
                                          const Vector& y);

/// Constrained minimiser of 1/2 |c + a J v_C|^2 over a <= omega, v_C = -J^T c.
/// Throws DegenerateInputError when J^T c = 0.
double cauchy_alpha(const Matrix& J, const Vector& c, double omega);

/// Normal component: truncated CG (Steihaug) on min 1/2 |c + J v|^2 subject to
/// |v| <= omega |J^T c|, started from v = 0, with an explicit check of the
/// Cauchy decrease condition. max_inner <= 0 means n iterations.
NormalStepResult normal_step(const Matrix& J, const Vector& c, double omega,
                             double eps_v, int max_inner = 0);

/// Exact tangential component through an orthonormal null-space basis of J.
/// y is the minimum-norm least-squares multiplier.
TangentialStepResult exact_tangential(const HessianStrategy& H,
                                      const Matrix& J, const Vector& g,
                                      const Vector& v);
TangentialStepResult exact_tangential(const HessianStrategy& H,
                                      const Matrix& J,
                                      const JacobianFactorization& factors,
                                      const Vector& g, const Vector& v);

/// Inexact tangential component: MINRES on the saddle-point system, stopped at
/// the first iterate with |r| <= gamma_r beta_k and |rho| <= gamma_rho beta_k.
/// If max_inner iterations (default n + m) pass without acceptance the exact
/// solution is returned instead.
TangentialStepResult inexact_tangential(const HessianStrategy& H,
                                        const Matrix& J, const Vector& g,
                                        const Vector& v, double beta_k,
                                        double gamma_r, double gamma_rho,
                                        int max_inner = 0);
TangentialStepResult inexact_tangential(const HessianStrategy& H,
                                        const Matrix& J,
                                        const JacobianFactorization& factors,
                                        const Vector& g, const Vector& v,
                                        double beta_k, double gamma_r,
                                        double gamma_rho, int max_inner = 0);

struct RangeNullSplit {
  Vector range_part;  // in Range(J^T)
  Vector null_part;   // in Null(J)
};

/// u = range_part + null_part with range_part the projection onto Range(J^T).
RangeNullSplit range_null_split(const Matrix& J, const Vector& u);

}  // namespace itsqp
