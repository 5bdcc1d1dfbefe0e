#include "itsqp/driver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace itsqp {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

void SolverConfig::validate() const {
  require(omega > 0.0, "omega must be positive");
  require(eps_v > 0.0 && eps_v <= 1.0, "eps_v must lie in (0, 1]");
  require(eta > 0.0, "eta must be positive");
  require(theta > 0.0, "theta must be positive");
  require(nu > 0.0, "nu must be positive");
  require(sigma > 0.0 && sigma < 1.0, "sigma must lie in (0, 1)");
  require(eps_tau >= 0.0 && eps_tau < 1.0, "eps_tau must lie in [0, 1)");
  require(tau_init > 0.0, "tau_init must be positive");
  require(gamma_r > 0.0 && gamma_rho > 0.0,
          "termination tolerances gamma_r, gamma_rho must be positive");
  require(K > 0, "iteration budget K must be positive");
  const double alpha_max = nu + theta * eta / std::sqrt(static_cast<double>(K));
  if (alpha_max > 1.0) {
    std::ostringstream os;
    os << "nu + theta * beta = " << alpha_max << " exceeds 1";
    throw ConfigError(os.str());
  }
}

double beta_schedule(const SolverConfig& config, int /*k*/) {
  return config.eta / std::sqrt(static_cast<double>(config.K));
}

double alpha_select(const SolverConfig& config, double beta_k) {
  switch (config.alpha_rule) {
    case AlphaRule::lower:
      return config.nu;
    case AlphaRule::upper:
      return config.nu + config.theta * beta_k;
    case AlphaRule::midpoint:
      return config.nu + 0.5 * config.theta * beta_k;
  }
  return config.nu;
}

namespace {

NuSuggestion finish(double model_bound, const NuEstimates& est) {
  NuSuggestion s;
  s.model_bound = model_bound;
  s.interval_bound = 1.0 - est.theta_kappa_beta;
  s.nu = std::min(s.model_bound, s.interval_bound);
  s.valid = s.nu > 0.0;
  return s;
}

}  // namespace

NuSuggestion suggest_nu(const NuEstimates& est) {
  const double denom = 2.0 * (est.tau_min * est.lipschitz_grad +
                              est.lipschitz_jacobian) *
                       est.omega * est.omega;
  return finish(est.sigma * est.kappa_v / est.kappa_c / denom, est);
}

NuSuggestion suggest_nu_vanishing_tau(const NuEstimates& est) {
  const double denom = 2.0 * est.lipschitz_jacobian * est.omega * est.omega;
  return finish(est.kappa_v / est.kappa_c / denom, est);
}

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::ok:
      return "ok";
    case RunStatus::evaluation_failure:
      return "evaluation_failure";
    case RunStatus::curvature_failure:
      return "curvature_failure";
    case RunStatus::numeric_failure:
      return "numeric_failure";
  }
  return "unknown";
}

RunResult run(const ProblemInstance& problem, GradientOracle& oracle,
              const SolverConfig& config, const RunOptions& options) {
  config.validate();
  const HessianStrategy& H = config.hessian;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  RunResult result;
  result.noise_variance_bound = oracle.variance_bound();
  result.merit = MeritState::initial(config.tau_init);
  result.logs.reserve(static_cast<std::size_t>(config.K));
  Vector x = options.x0 ? *options.x0 : problem.x0;
  result.x_final = x;

  try {
    for (int k = 0; k < config.K; ++k) {
      const PointEval at = evaluate(problem, x);
      const JacobianFactorization factors(at.J);

      const NormalStepResult normal = normal_step(
          at.J, at.c, config.omega, config.eps_v, config.normal_max_inner);
      const Vector g = oracle.perturb(at.grad);

      const bool two_stepsize = options.law == StepLaw::two_stepsize;
      const double beta = two_stepsize ? beta_schedule(config, k) : 1.0;
      const TangentialStepResult tangential =
          config.tangential_mode == TangentialMode::exact
              ? exact_tangential(H, at.J, factors, g, normal.v)
              : inexact_tangential(H, at.J, factors, g, normal.v, beta,
                                   config.gamma_r, config.gamma_rho,
                                   config.tangential_max_inner);
      const double alpha = two_stepsize ? alpha_select(config, beta) : config.nu;

      IterationLog log;
      log.k = k;
      log.x = x;
      log.f_val = at.f;
      log.c_inf_norm = at.c.size() > 0 ? at.c.cwiseAbs().maxCoeff() : 0.0;
      log.v = normal.v;
      log.u = tangential.u;
      log.d = beta * tangential.u + normal.v;
      log.beta = beta;
      log.alpha = alpha;
      log.rho_norm = tangential.rho.norm();
      log.r_norm = tangential.r.norm();
      log.normal_inner_iterations = normal.inner_iterations;
      log.tangential_inner_iterations = tangential.inner_iterations;
      log.tangential_exact_fallback = tangential.exact_fallback;
      log.smallest_nonzero_singular_value =
          factors.smallest_nonzero_singular_value();
      log.cauchy_reduction = normal.cauchy_reduction;
      log.normal_decrease_constant =
          normal_decrease_constant(at.J, config.omega, config.eps_v);

      const TrueStepBundle truth = true_step(at, factors, H, normal.v, beta);
      const StationarityMeasures measures = stationarity_measures(at, truth);
      log.c_norm = measures.c_norm;
      log.jtc_norm = measures.jtc_norm;
      log.kkt_residual = measures.kkt_2norm;
      log.kkt_inf_norm = measures.kkt_infnorm;

      if (config.track_merit) {
        const MeritUpdate update =
            tau_update(result.merit, k, at.grad, truth.d_true, beta,
                       truth.u_true, H, at.c, at.J, normal.v, config.sigma,
                       config.eps_tau);
        result.merit = update.state;
        log.tau = update.state.tau;
        log.tau_trial = update.state.tau_trial;
        log.merit_q = update.q;
        log.normal_reduction = update.normal_reduction;
        log.true_model_reduction =
            model_reduction(log.tau, at.grad, truth.d_true, at.c, at.J);
        log.true_uhu = truth.u_true.dot(H.apply(truth.u_true));
      } else {
        log.tau = log.tau_trial = log.merit_q = nan;
        log.true_model_reduction = log.true_uhu = nan;
        log.normal_reduction = normal.model_reduction;
      }

      x += alpha * log.d;
      result.x_final = x;
      result.logs.push_back(std::move(log));
      if (options.stop && options.stop(result.logs.back())) {
        result.stopped_early = true;
        break;
      }
    }
  } catch (const EvaluationError& e) {
    result.status = RunStatus::evaluation_failure;
    result.failure_message = e.what();
  } catch (const CurvatureError& e) {
    result.status = RunStatus::curvature_failure;
    result.failure_message = e.what();
  } catch (const NumericError& e) {
    result.status = RunStatus::numeric_failure;
    result.failure_message = e.what();
  }
  return result;
}

}  // namespace itsqp
