#pragma once

#include "itsqp/diagnostics.hpp"
#include "itsqp/problem.hpp"
#include "itsqp/subproblems.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace itsqp {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class AlphaRule { lower, upper, midpoint };

struct SolverConfig {
  double omega = 1.0;   // normal-step trust scale
  double eps_v = 1.0;   // Cauchy decrease fraction, (0, 1]
  double eta = 1.0;     // beta = eta / sqrt(K)
  double theta = 0.1;   // alpha interval width factor
  double nu = 0.5;      // alpha interval base
  double sigma = 0.5;   // merit model-reduction fraction, (0, 1)
  double eps_tau = 0.1; // merit decrease factor, [0, 1)
  double tau_init = 1.0;
  double gamma_r = 1e-8;  // J u enters J d directly; see README
  double gamma_rho = 1.0;
  int K = 10000;
  TangentialMode tangential_mode = TangentialMode::exact;
  HessianStrategy hessian = HessianStrategy::identity();
  AlphaRule alpha_rule = AlphaRule::upper;
  int normal_max_inner = 0;      // <= 0: n
  int tangential_max_inner = 0;  // <= 0: n + m
  bool track_merit = true;       // requires the exact gradient

  /// Throws ConfigError when a parameter is out of range or nu + theta beta > 1.
  void validate() const;
};

/// beta_k = eta / sqrt(K), constant over the run.
double beta_schedule(const SolverConfig& config, int k);

/// alpha_k in [nu, nu + theta beta_k] according to the configured rule.
double alpha_select(const SolverConfig& config, double beta_k);

/// Inputs for the advisory nu formulas. The constants are problem-level bounds
/// that the caller estimates; nothing here is measured.
struct NuEstimates {
  double lipschitz_grad = 1.0;      // L
  double lipschitz_jacobian = 1.0;  // Gamma
  double tau_min = 1.0;
  double kappa_v = 1.0;
  double kappa_c = 1.0;
  double sigma = 0.5;
  double omega = 1.0;
  double theta_kappa_beta = 0.0;  // theta * kappa_beta
};

struct NuSuggestion {
  double nu = 0.0;
  double model_bound = 0.0;     // curvature branch of the minimum
  double interval_bound = 0.0;  // 1 - theta kappa_beta
  bool valid = false;           // nu > 0
};

/// nu <= min{ sigma kappa_v / (kappa_c 2 (tau_min L + Gamma) omega^2),
///            1 - theta kappa_beta }.
NuSuggestion suggest_nu(const NuEstimates& est);
/// Variant for a vanishing merit parameter:
/// nu <= min{ kappa_v / (kappa_c 2 Gamma omega^2), 1 - theta kappa_beta }.
NuSuggestion suggest_nu_vanishing_tau(const NuEstimates& est);

/// Per-iteration record. Quantities are evaluated at x (the iterate before
/// the step is taken).
struct IterationLog {
  int k = 0;
  Vector x;
  double f_val = 0.0;
  double c_norm = 0.0;
  double c_inf_norm = 0.0;
  double jtc_norm = 0.0;
  Vector v;
  Vector u;
  Vector d;
  double beta = 0.0;
  double alpha = 0.0;
  double rho_norm = 0.0;
  double r_norm = 0.0;
  int normal_inner_iterations = 0;
  int tangential_inner_iterations = 0;
  bool tangential_exact_fallback = false;
  double kkt_residual = 0.0;  // 2-norm
  double kkt_inf_norm = 0.0;
  double smallest_nonzero_singular_value = 0.0;
  // Merit diagnostics (NaN when tracking is disabled).
  double tau = 0.0;
  double tau_trial = 0.0;
  double merit_q = 0.0;
  double normal_reduction = 0.0;   // |c| - |c + J v|
  double cauchy_reduction = 0.0;
  double true_model_reduction = 0.0;  // Delta l(x, tau_k, grad f, d_true)
  double true_uhu = 0.0;              // u_true^T H u_true
  double normal_decrease_constant = 0.0;
};

enum class RunStatus { ok, evaluation_failure, curvature_failure, numeric_failure };

std::string to_string(RunStatus status);

struct RunResult {
  std::vector<IterationLog> logs;
  Vector x_final;
  RunStatus status = RunStatus::ok;
  std::string failure_message;
  bool stopped_early = false;
  MeritState merit;
  double noise_variance_bound = 0.0;  // M = n * epsilon_n

  int iterations() const { return static_cast<int>(logs.size()); }
};

/// How d_k and alpha_k are formed.
enum class StepLaw {
  two_stepsize,   // d = beta u + v, alpha in [nu, nu + theta beta]
  single_stepsize // d = u + v, alpha = nu
};

struct RunOptions {
  StepLaw law = StepLaw::two_stepsize;
  std::optional<Vector> x0;  // problem.x0 when absent
  /// Called after each iteration; returning true stops the run.
  std::function<bool(const IterationLog&)> stop;
};

/// Two-stepsize stochastic SQP. Runs config.K iterations unless options.stop
/// fires. Oracle failures end the run with a partial log and a failure status.
RunResult run(const ProblemInstance& problem, GradientOracle& oracle,
              const SolverConfig& config, const RunOptions& options = {});

}  // namespace itsqp
