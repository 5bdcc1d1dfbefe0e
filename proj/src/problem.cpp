#include "itsqp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace itsqp {

namespace {

std::string describe(const std::string& problem, const char* what,
                     const Vector& x) {
  std::ostringstream os;
  os << problem << ": " << what << " at x = [";
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << "]";
  return os.str();
}

}  // namespace

PointEval evaluate(const ProblemInstance& problem, const Vector& x) {
  PointEval e;
  e.f = problem.f(x);
  e.grad = problem.grad_f(x);
  e.c = problem.c(x);
  e.J = problem.jac_c(x);
  if (e.grad.size() != problem.n || e.c.size() != problem.m ||
      e.J.rows() != problem.m || e.J.cols() != problem.n) {
    throw EvaluationError(describe(problem.name, "oracle shape mismatch", x), x);
  }
  if (!std::isfinite(e.f) || !e.grad.allFinite() || !e.c.allFinite() ||
      !e.J.allFinite()) {
    throw EvaluationError(describe(problem.name, "non-finite evaluation", x),
                          x);
  }
  return e;
}

GradientOracle::GradientOracle(const ProblemInstance& problem, NoiseSpec noise)
    : problem_(&problem), noise_(noise), engine_(noise.seed) {
  if (!(noise.epsilon_n >= 0.0)) {
    throw std::invalid_argument("noise variance must be nonnegative");
  }
}

Vector GradientOracle::sample(const Vector& x) {
  Vector g = problem_->grad_f(x);
  if (!g.allFinite()) {
    throw EvaluationError(
        describe(problem_->name, "non-finite gradient evaluation", x), x);
  }
  return perturb(g);
}

Vector GradientOracle::perturb(const Vector& exact_gradient) {
  Vector g = exact_gradient;
  if (noise_.epsilon_n == 0.0) return g;
  const double sd = std::sqrt(noise_.epsilon_n);
  for (Eigen::Index i = 0; i < g.size(); ++i) g[i] += sd * normal_(engine_);
  return g;
}

FiniteDifferenceReport finite_difference_check(const ProblemInstance& problem,
                                               const Vector& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  const PointEval at = evaluate(problem, x);
  FiniteDifferenceReport report;
  Vector xp = x;
  Vector xm = x;
  for (int j = 0; j < problem.n; ++j) {
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    const double df = (problem.f(xp) - problem.f(xm)) / (2.0 * h);
    const Vector dc = (problem.c(xp) - problem.c(xm)) / (2.0 * h);
    report.gradient_error =
        std::max(report.gradient_error,
                 std::abs(at.grad[j] - df) / std::max(1.0, std::abs(df)));
    for (int i = 0; i < problem.m; ++i) {
      report.jacobian_error =
          std::max(report.jacobian_error, std::abs(at.J(i, j) - dc[i]) /
                                              std::max(1.0, std::abs(dc[i])));
    }
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return report;
}

}  // namespace itsqp
