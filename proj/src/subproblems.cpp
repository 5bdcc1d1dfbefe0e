#include "itsqp/subproblems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace itsqp {

HessianStrategy HessianStrategy::identity() { return HessianStrategy(); }

HessianStrategy HessianStrategy::supplied(Matrix H, double zeta) {
  if (H.rows() != H.cols()) throw std::invalid_argument("Hessian must be square");
  if (!(zeta > 0.0)) throw std::invalid_argument("zeta must be positive");
  const double asym = (H - H.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) {
    std::ostringstream os;
    os << "Hessian is not symmetric (max asymmetry " << asym << ")";
    throw std::invalid_argument(os.str());
  }
  HessianStrategy s;
  s.kind_ = Kind::supplied;
  s.zeta_ = zeta;
  s.H_ = std::move(H);
  return s;
}

Matrix HessianStrategy::matrix(int n) const {
  if (kind_ == Kind::identity) return Matrix::Identity(n, n);
  if (H_.rows() != n) throw std::invalid_argument("Hessian dimension mismatch");
  return H_;
}

Vector HessianStrategy::apply(const Vector& u) const {
  if (kind_ == Kind::identity) return u;
  if (H_.rows() != u.size()) throw std::invalid_argument("Hessian dimension mismatch");
  return H_ * u;
}

std::pair<Vector, Vector> saddle_residual(const HessianStrategy& H,
                                          const Matrix& J, const Vector& g,
                                          const Vector& v, const Vector& u,
                                          const Vector& y) {
  Vector rho = H.apply(u) + J.transpose() * y + (g + H.apply(v));
  Vector r = J * u;
  return {std::move(rho), std::move(r)};
}

double cauchy_alpha(const Matrix& J, const Vector& c, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  const Vector jtc = J.transpose() * c;
  const double jtc_sq = jtc.squaredNorm();
  if (jtc_sq == 0.0) {
    throw DegenerateInputError("Cauchy stepsize undefined: J^T c = 0");
  }
  const double curvature = (J * jtc).squaredNorm();
  if (curvature == 0.0) return omega;
  return std::min(omega, jtc_sq / curvature);
}

NormalStepResult normal_step(const Matrix& J, const Vector& c, double omega,
                             double eps_v, int max_inner) {
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  if (!(eps_v > 0.0 && eps_v <= 1.0))
    throw std::invalid_argument("eps_v must lie in (0, 1]");
  const Eigen::Index n = J.cols();
  NormalStepResult out;
  out.v = Vector::Zero(n);

  const Vector jtc = J.transpose() * c;
  const double jtc_norm = jtc.norm();
  const double c_norm = c.norm();
  if (jtc_norm == 0.0 || c_norm == 0.0) return out;
  if (max_inner <= 0) max_inner = static_cast<int>(n);

  out.alpha_cauchy = cauchy_alpha(J, c, omega);
  const Vector v_cauchy = -out.alpha_cauchy * jtc;
  out.cauchy_reduction = c_norm - (c + J * v_cauchy).norm();

  // Steihaug-truncated CG on the normal equations J^T J v = -J^T c.
  const double radius = omega * jtc_norm;
  Vector v = Vector::Zero(n);
  Vector resid = -jtc;
  Vector p = resid;
  double resid_sq = resid.squaredNorm();
  const double stop = 1e-8 * jtc_norm;
  for (int t = 0; t < max_inner; ++t) {
    ++out.inner_iterations;
    const Vector Jp = J * p;
    const double curvature = Jp.squaredNorm();
    const double pv = p.dot(v);
    const double pp = p.squaredNorm();
    const auto to_boundary = [&] {
      const double disc = pv * pv + pp * (radius * radius - v.squaredNorm());
      return (-pv + std::sqrt(std::max(disc, 0.0))) / pp;
    };
    if (curvature <= 0.0) {
      v += to_boundary() * p;
      out.hit_boundary = true;
      break;
    }
    const double step = resid_sq / curvature;
    if ((v + step * p).norm() >= radius) {
      v += to_boundary() * p;
      out.hit_boundary = true;
      break;
    }
    v += step * p;
    resid -= step * (J.transpose() * Jp);
    const double next_sq = resid.squaredNorm();
    if (std::sqrt(next_sq) <= stop) break;
    p = resid + (next_sq / resid_sq) * p;
    resid_sq = next_sq;
  }

  out.v = v;
  out.model_reduction = c_norm - (c + J * v).norm();
  const double slack = 8.0 * std::numeric_limits<double>::epsilon() * c_norm;
  if (!(out.model_reduction >= eps_v * out.cauchy_reduction - slack) ||
      v.norm() > radius * (1.0 + 1e-12)) {
    out.v = v_cauchy;
    out.model_reduction = out.cauchy_reduction;
    out.cauchy_fallback = true;
  }
  return out;
}

TangentialStepResult exact_tangential(const HessianStrategy& H,
                                      const Matrix& J, const Vector& g,
                                      const Vector& v) {
  return exact_tangential(H, J, JacobianFactorization(J), g, v);
}

TangentialStepResult exact_tangential(const HessianStrategy& H,
                                      const Matrix& J,
                                      const JacobianFactorization& factors,
                                      const Vector& g, const Vector& v) {
  const Eigen::Index n = J.cols();
  const Vector rhs = g + H.apply(v);
  TangentialStepResult out;
  out.mode = TangentialMode::exact;
  out.u = Vector::Zero(n);

  const Matrix Z = factors.null_basis();
  if (Z.cols() > 0) {
    const Matrix HZ = H.matrix(static_cast<int>(n)) * Z;
    const Matrix reduced = Z.transpose() * HZ;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(reduced);
    const Vector& lambda = eig.eigenvalues();
    if (!(lambda[0] >= kMinReducedCurvature)) {
      std::ostringstream os;
      os << "reduced Hessian Z^T H Z is not positive definite (smallest "
            "eigenvalue "
         << lambda[0] << ")";
      throw CurvatureError(os.str(), lambda[0]);
    }
    const Matrix& Q = eig.eigenvectors();
    const Vector coeffs =
        ((Q.transpose() * (-(Z.transpose() * rhs))).array() / lambda.array())
            .matrix();
    out.u = Z * (Q * coeffs);
  }
  out.y = -factors.transpose_pinv_apply(rhs + H.apply(out.u));
  std::tie(out.rho, out.r) = saddle_residual(H, J, g, v, out.u, out.y);
  return out;
}

TangentialStepResult inexact_tangential(const HessianStrategy& H,
                                        const Matrix& J, const Vector& g,
                                        const Vector& v, double beta_k,
                                        double gamma_r, double gamma_rho,
                                        int max_inner) {
  return inexact_tangential(H, J, JacobianFactorization(J), g, v, beta_k,
                            gamma_r, gamma_rho, max_inner);
}

TangentialStepResult inexact_tangential(const HessianStrategy& H,
                                        const Matrix& J,
                                        const JacobianFactorization& factors,
                                        const Vector& g, const Vector& v,
                                        double beta_k, double gamma_r,
                                        double gamma_rho, int max_inner) {
  if (!(beta_k > 0.0)) throw std::invalid_argument("beta_k must be positive");
  if (!(gamma_r > 0.0 && gamma_rho > 0.0))
    throw std::invalid_argument("termination tolerances must be positive");
  const Eigen::Index n = J.cols();
  const Eigen::Index m = J.rows();
  const Eigen::Index size = n + m;
  if (max_inner <= 0) max_inner = static_cast<int>(size);

  const double r_tol = gamma_r * beta_k;
  const double rho_tol = gamma_rho * beta_k;
  const Vector Hv = H.apply(v);

  // K z for z = (u, y), K = [H J^T; J 0].
  const auto apply_kkt = [&](const Vector& z) {
    Vector out(size);
    out.head(n) = H.apply(z.head(n)) + J.transpose() * z.tail(m);
    out.tail(m) = J * z.head(n);
    return out;
  };

  TangentialStepResult out;
  out.mode = TangentialMode::iterative;
  Vector z = Vector::Zero(size);
  const auto accept = [&](const Vector& iterate) {
    out.u = iterate.head(n);
    out.y = iterate.tail(m);
    std::tie(out.rho, out.r) = saddle_residual(H, J, g, v, out.u, out.y);
    return out.r.norm() <= r_tol && out.rho.norm() <= rho_tol;
  };
  if (accept(z)) return out;

  // MINRES (Paige-Saunders) on K z = -(g + H v, 0), z_0 = 0.
  Vector b = Vector::Zero(size);
  b.head(n) = -(g + Hv);
  Vector r1 = b;
  Vector y = b;
  double beta1 = b.norm();
  double beta = beta1;
  double oldb = 0.0;
  double dbar = 0.0;
  double epsln = 0.0;
  double phibar = beta1;
  double cs = -1.0;
  double sn = 0.0;
  Vector w = Vector::Zero(size);
  Vector w2 = Vector::Zero(size);
  Vector r2 = r1;
  const double tiny = std::numeric_limits<double>::epsilon();

  for (int t = 1; t <= max_inner && beta > 0.0; ++t) {
    out.inner_iterations = t;
    const Vector vk = y / beta;
    y = apply_kkt(vk);
    if (t >= 2) y -= (beta / oldb) * r1;
    const double alfa = vk.dot(y);
    y -= (alfa / beta) * r2;
    r1 = r2;
    r2 = y;
    oldb = beta;
    beta = r2.norm();
    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), tiny);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;
    const Vector w1 = w2;
    w2 = w;
    w = (vk - oldeps * w1 - delta * w2) / gamma;
    z += phi * w;
    if (!z.allFinite()) {
      throw NumericError("non-finite iterate in the iterative tangential solve");
    }
    if (accept(z)) return out;
  }

  const int used = out.inner_iterations;
  out = exact_tangential(H, J, factors, g, v);
  out.mode = TangentialMode::iterative;
  out.inner_iterations = used;
  out.exact_fallback = true;
  return out;
}

RangeNullSplit range_null_split(const Matrix& J, const Vector& u) {
  const JacobianFactorization factors(J);
  RangeNullSplit split;
  split.range_part = factors.project_row_space(u);
  split.null_part = u - split.range_part;
  return split;
}

}  // namespace itsqp
