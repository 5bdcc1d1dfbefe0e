#pragma once

#include "itsqp/linalg.hpp"
#include "itsqp/problem.hpp"
#include "itsqp/subproblems.hpp"

#include <limits>
#include <utility>
#include <vector>

namespace itsqp {

/// Tangential quantities computed with the exact gradient.
struct TrueStepBundle {
  Vector u_true;
  Vector d_true;  // beta * u_true + v
  Vector y_true;  // minimum-norm least-squares multiplier
};

TrueStepBundle true_step(const PointEval& at, const HessianStrategy& H,
                         const Vector& v, double beta);
TrueStepBundle true_step(const PointEval& at,
                         const JacobianFactorization& factors,
                         const HessianStrategy& H, const Vector& v,
                         double beta);

/// l2 merit function tau * f + |c|.
double merit_phi(double tau, double f_val, double c_norm);

/// Reduction of the local merit model: -tau g^T d + |c| - |c + J d|.
double model_reduction(double tau, const Vector& g, const Vector& d,
                       const Vector& c, const Matrix& J);

/// Merit parameter sequence. Only a diagnostic: the iteration never reads it.
struct MeritState {
  double tau = 1.0;
  double tau_trial = std::numeric_limits<double>::infinity();
  std::vector<std::pair<int, double>> history;

  static MeritState initial(double tau_init) {
    MeritState s;
    s.tau = tau_init;
    return s;
  }
};

struct MeritUpdate {
  MeritState state;
  double q = 0.0;                 // grad_f^T d_true + beta u_true^T H u_true
  double normal_reduction = 0.0;  // |c| - |c + J v|
  bool decreased = false;
};

/// One trial/update step of the merit parameter.
MeritUpdate tau_update(const MeritState& state, int k, const Vector& grad_f,
                       const Vector& d_true, double beta, const Vector& u_true,
                       const HessianStrategy& H, const Vector& c,
                       const Matrix& J, const Vector& v, double sigma,
                       double eps_tau);

struct StationarityMeasures {
  double jtc_norm = 0.0;
  double c_norm = 0.0;
  double kkt_2norm = 0.0;
  double kkt_infnorm = 0.0;
};

/// |J^T c|, |c| and the KKT residual |grad f + J^T y_true| in 2- and inf-norm.
StationarityMeasures stationarity_measures(const PointEval& at,
                                           const HessianStrategy& H,
                                           const Vector& v, double beta);
StationarityMeasures stationarity_measures(const PointEval& at,
                                           const TrueStepBundle& truth);

/// Constant of the per-iteration normal-step decrease bound
///   |c| (|c| - |c + J v|) >= kappa |J^T c|^2,
/// kappa = (eps_v / 2) min{omega, omega^2 / |J^T J|, 1 / |J^T J|}.
double normal_decrease_constant(const Matrix& J, double omega, double eps_v);

}  // namespace itsqp
