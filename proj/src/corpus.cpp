#include "itsqp/corpus.hpp"

#include <cstdint>
#include <random>

namespace itsqp {

namespace {

// Uniform doubles built from raw engine output so the corpus does not depend
// on the standard library's distribution implementations.
class CorpusRng {
 public:
  explicit CorpusRng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
  }
  Matrix matrix(int rows, int cols) {
    Matrix a(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) a(i, j) = uniform(-1.0, 1.0);
    return a;
  }
  Vector vector(int size, double scale = 1.0) {
    Vector v(size);
    for (int i = 0; i < size; ++i) v[i] = scale * uniform(-1.0, 1.0);
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

ProblemInstance make_p1() {
  ProblemInstance p;
  p.name = "P1";
  p.description = "LICQ quadratic: min 1/2|x|^2 s.t. x1 - 1 = 0";
  p.n = 2;
  p.m = 1;
  p.f = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  p.grad_f = [](const Vector& x) -> Vector { return x; };
  p.c = [](const Vector& x) {
    Vector c(1);
    c << x[0] - 1.0;
    return c;
  };
  p.jac_c = [](const Vector&) {
    Matrix J(1, 2);
    J << 1.0, 0.0;
    return J;
  };
  p.x0 = Vector(2);
  p.x0 << -0.5, 1.5;
  p.known_solution = Vector(2);
  *p.known_solution << 1.0, 0.0;
  p.licq_everywhere = true;
  p.feasible = true;
  p.jacobian_rank = 1;
  return p;
}

ProblemInstance make_p2() {
  ProblemInstance p;
  p.name = "P2";
  p.description =
      "rank-deficient feasible: min 1/2|x|^2 s.t. (x1 - 1, 2x1 - 2) = 0";
  p.n = 2;
  p.m = 2;
  p.f = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  p.grad_f = [](const Vector& x) -> Vector { return x; };
  p.c = [](const Vector& x) {
    Vector c(2);
    c << x[0] - 1.0, 2.0 * x[0] - 2.0;
    return c;
  };
  p.jac_c = [](const Vector&) {
    Matrix J(2, 2);
    J << 1.0, 0.0, 2.0, 0.0;
    return J;
  };
  p.x0 = Vector(2);
  p.x0 << -0.5, 1.5;
  p.known_solution = Vector(2);
  *p.known_solution << 1.0, 0.0;
  p.licq_everywhere = false;
  p.feasible = true;
  p.jacobian_rank = 1;
  return p;
}

ProblemInstance make_p3() {
  ProblemInstance p;
  p.name = "P3";
  p.description = "infeasible: min 1/2 x^2 s.t. x^2 + 1 = 0";
  p.n = 1;
  p.m = 1;
  p.f = [](const Vector& x) { return 0.5 * x[0] * x[0]; };
  p.grad_f = [](const Vector& x) -> Vector { return x; };
  p.c = [](const Vector& x) {
    Vector c(1);
    c << x[0] * x[0] + 1.0;
    return c;
  };
  p.jac_c = [](const Vector& x) {
    Matrix J(1, 1);
    J << 2.0 * x[0];
    return J;
  };
  p.x0 = Vector::Constant(1, 1.0);
  p.licq_everywhere = false;
  p.feasible = false;
  p.jacobian_rank = 1;  // drops to 0 at x = 0
  return p;
}

struct RandomSpec {
  const char* name;
  int n;
  int m;
  int rank;
  bool quartic;   // quartic objective term and cubic constraint term
  bool feasible;  // otherwise an offset outside Range(T) is added to c
  std::uint64_t seed;
};

// c(x) = T (s + k s^3) + e,  s = B x - d,  B: rank x n,  T: m x rank.
// J = T diag(1 + 3 k s^2) B has rank `rank` everywhere.
ProblemInstance make_random(const RandomSpec& spec) {
  CorpusRng rng(spec.seed);
  const Matrix B = rng.matrix(spec.rank, spec.n);
  const Matrix T = spec.rank == spec.m
                       ? Matrix(Matrix::Identity(spec.m, spec.m) +
                                0.3 * rng.matrix(spec.m, spec.m))
                       : rng.matrix(spec.m, spec.rank);
  const Vector x_feas = rng.vector(spec.n);
  const Vector d = B * x_feas;
  const Vector center = rng.vector(spec.n, 2.0);
  const Vector x0 = rng.vector(spec.n, 2.0);
  Vector offset = Vector::Zero(spec.m);
  if (!spec.feasible) {
    Vector e = rng.vector(spec.m);
    e -= T * (T.transpose() * T).ldlt().solve(T.transpose() * e);
    offset = 0.5 * e / e.norm();
  }
  const double cubic = spec.quartic ? 0.1 : 0.0;
  const double quartic = spec.quartic ? 0.05 : 0.0;

  ProblemInstance p;
  p.name = spec.name;
  p.n = spec.n;
  p.m = spec.m;
  p.f = [center, quartic](const Vector& x) {
    return 0.5 * (x - center).squaredNorm() +
           0.25 * quartic * x.array().pow(4).sum();
  };
  p.grad_f = [center, quartic](const Vector& x) -> Vector {
    return (x - center).array() + quartic * x.array().cube();
  };
  p.c = [B, T, d, offset, cubic](const Vector& x) -> Vector {
    const Vector s = B * x - d;
    return T * (s.array() + cubic * s.array().cube()).matrix() + offset;
  };
  p.jac_c = [B, T, d, cubic](const Vector& x) -> Matrix {
    const Vector s = B * x - d;
    const Vector scale = (1.0 + 3.0 * cubic * s.array().square()).matrix();
    return T * scale.asDiagonal() * B;
  };
  p.x0 = x0;
  if (spec.feasible && !spec.quartic) {
    p.known_solution =
        center - B.transpose() * (B * B.transpose()).ldlt().solve(B * center - d);
  }
  p.licq_everywhere = spec.rank == spec.m;
  p.feasible = spec.feasible;
  p.jacobian_rank = spec.rank;
  p.description = std::string(spec.quartic ? "quartic" : "quadratic") +
                  " objective, rank " + std::to_string(spec.rank) + " of " +
                  std::to_string(spec.m) + " constraints" +
                  (spec.feasible ? "" : ", infeasible");
  return p;
}

std::vector<ProblemInstance> build_corpus() {
  static constexpr RandomSpec kRandom[] = {
      {"R1", 3, 1, 1, false, true, 101},  {"R2", 4, 2, 2, true, true, 102},
      {"R3", 4, 3, 2, false, true, 103},  {"R4", 5, 3, 1, true, true, 104},
      {"R5", 5, 2, 2, true, true, 105},   {"R6", 6, 4, 3, false, true, 106},
      {"R7", 3, 2, 1, false, false, 107}, {"R8", 6, 3, 2, true, false, 108},
  };
  std::vector<ProblemInstance> corpus;
  corpus.push_back(make_p1());
  corpus.push_back(make_p2());
  corpus.push_back(make_p3());
  for (const auto& spec : kRandom) corpus.push_back(make_random(spec));
  return corpus;
}

}  // namespace

const std::vector<ProblemInstance>& corpus_problems() {
  static const std::vector<ProblemInstance> corpus = build_corpus();
  return corpus;
}

const ProblemInstance* find_problem(const std::string& name) {
  for (const auto& p : corpus_problems())
    if (p.name == name) return &p;
  return nullptr;
}

std::vector<std::string> corpus_names() {
  std::vector<std::string> names;
  for (const auto& p : corpus_problems()) names.push_back(p.name);
  return names;
}

}  // namespace itsqp
