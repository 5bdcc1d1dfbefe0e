#pragma once

#include "itsqp/problem.hpp"

#include <optional>
#include <string>
#include <vector>

namespace itsqp {

/// Embedded test problems. The first three are the canonical instances:
///   P1  LICQ quadratic, n=2, m=1, solution (1, 0) with multiplier -1
///   P2  duplicated linear constraint, J has rank 1 everywhere
///   P3  infeasible, c(x) = x^2 + 1, infeasible stationary point x = 0
/// followed by seeded random quadratic/quartic instances R1..R8 with a fixed
/// Jacobian rank. The list is identical on every platform.
const std::vector<ProblemInstance>& corpus_problems();

/// Looks a corpus problem up by name.
const ProblemInstance* find_problem(const std::string& name);

std::vector<std::string> corpus_names();

}  // namespace itsqp
