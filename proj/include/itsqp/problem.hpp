#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

namespace itsqp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Thrown when an objective or constraint oracle returns a non-finite value or
/// a result of the wrong shape. Carries the offending point.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, Vector x)
      : std::runtime_error(what), x_(std::move(x)) {}
  const Vector& point() const { return x_; }

 private:
  Vector x_;
};

/// Equality-constrained problem  min f(x)  s.t.  c(x) = 0  with analytic
/// first derivatives. Instances are immutable once built and may be shared
/// across threads.
struct ProblemInstance {
  std::string name;
  int n = 0;
  int m = 0;
  std::function<double(const Vector&)> f;
  std::function<Vector(const Vector&)> grad_f;
  std::function<Vector(const Vector&)> c;
  std::function<Matrix(const Vector&)> jac_c;  // m x n
  Vector x0;
  std::optional<Vector> known_solution;
  bool licq_everywhere = false;
  bool feasible = true;
  int jacobian_rank = 0;
  std::string description;
};

/// Everything the solver needs from the deterministic oracles at one point.
struct PointEval {
  double f = 0.0;
  Vector grad;
  Vector c;
  Matrix J;
};

/// Evaluates all oracles at x. Throws EvaluationError on non-finite output or
/// shape mismatch.
PointEval evaluate(const ProblemInstance& problem, const Vector& x);

struct NoiseSpec {
  double epsilon_n = 0.0;  // per-component variance
  std::uint64_t seed = 0;
};

/// Stochastic gradient oracle g = grad_f(x) + z,  z ~ N(0, epsilon_n I).
/// Owns its random stream; one oracle per run.
class GradientOracle {
 public:
  GradientOracle(const ProblemInstance& problem, NoiseSpec noise);

  /// Draws a gradient estimate at x. Advances the stream.
  Vector sample(const Vector& x);
  /// Same as sample() but reuses an already evaluated exact gradient.
  Vector perturb(const Vector& exact_gradient);

  const ProblemInstance& problem() const { return *problem_; }
  const NoiseSpec& noise() const { return noise_; }
  /// Bound on E||g - grad f||^2 for this noise model (n * epsilon_n).
  double variance_bound() const { return problem_->n * noise_.epsilon_n; }

 private:
  const ProblemInstance* problem_;
  NoiseSpec noise_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline Vector sample_gradient(GradientOracle& oracle, const Vector& x) {
  return oracle.sample(x);
}

struct FiniteDifferenceReport {
  double gradient_error = 0.0;
  double jacobian_error = 0.0;
};

/// Central-difference comparison of grad_f and jac_c against f and c. Errors
/// are componentwise |analytic - fd| / max(1, |fd|), maximised over entries.
FiniteDifferenceReport finite_difference_check(const ProblemInstance& problem,
                                               const Vector& x, double h);

}  // namespace itsqp
