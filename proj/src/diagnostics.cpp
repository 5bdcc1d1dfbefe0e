#include "itsqp/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace itsqp {

TrueStepBundle true_step(const PointEval& at, const HessianStrategy& H,
                         const Vector& v, double beta) {
  return true_step(at, JacobianFactorization(at.J), H, v, beta);
}

TrueStepBundle true_step(const PointEval& at,
                         const JacobianFactorization& factors,
                         const HessianStrategy& H, const Vector& v,
                         double beta) {
  const TangentialStepResult exact = exact_tangential(H, at.J, factors, at.grad, v);
  TrueStepBundle out;
  out.u_true = exact.u;
  out.y_true = exact.y;
  out.d_true = beta * out.u_true + v;
  return out;
}

double merit_phi(double tau, double f_val, double c_norm) {
  return tau * f_val + c_norm;
}

double model_reduction(double tau, const Vector& g, const Vector& d,
                       const Vector& c, const Matrix& J) {
  return -tau * g.dot(d) + c.norm() - (c + J * d).norm();
}

MeritUpdate tau_update(const MeritState& state, int k, const Vector& grad_f,
                       const Vector& d_true, double beta, const Vector& u_true,
                       const HessianStrategy& H, const Vector& c,
                       const Matrix& J, const Vector& v, double sigma,
                       double eps_tau) {
  MeritUpdate out;
  out.state = state;
  out.q = grad_f.dot(d_true) + beta * u_true.dot(H.apply(u_true));
  out.normal_reduction = c.norm() - (c + J * v).norm();
  double trial = std::numeric_limits<double>::infinity();
  if (out.q > 0.0) trial = (1.0 - sigma) * out.normal_reduction / out.q;
  out.state.tau_trial = trial;
  if (state.tau > trial) {
    out.state.tau = std::min((1.0 - eps_tau) * state.tau, trial);
    out.decreased = true;
  }
  out.state.history.emplace_back(k, out.state.tau);
  return out;
}

StationarityMeasures stationarity_measures(const PointEval& at,
                                           const HessianStrategy& H,
                                           const Vector& v, double beta) {
  return stationarity_measures(at, true_step(at, H, v, beta));
}

StationarityMeasures stationarity_measures(const PointEval& at,
                                           const TrueStepBundle& truth) {
  StationarityMeasures s;
  s.jtc_norm = (at.J.transpose() * at.c).norm();
  s.c_norm = at.c.norm();
  const Vector kkt = at.grad + at.J.transpose() * truth.y_true;
  s.kkt_2norm = kkt.norm();
  s.kkt_infnorm = kkt.size() > 0 ? kkt.cwiseAbs().maxCoeff() : 0.0;
  return s;
}

double normal_decrease_constant(const Matrix& J, double omega, double eps_v) {
  const double jtj = (J.transpose() * J).operatorNorm();
  double bound = omega;
  if (jtj > 0.0) bound = std::min({omega, omega * omega / jtj, 1.0 / jtj});
  return 0.5 * eps_v * bound;
}

}  // namespace itsqp
