#pragma once

#include "itsqp/driver.hpp"
#include "itsqp/problem.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace itsqp {

/// Feasibility and KKT thresholds of the experiment protocol.
inline constexpr double kFeasibilityTol = 1e-6;
inline constexpr double kKktTol = 1e-4;

enum class Variant { itsqp_exact, itsqp_iterative, ssqp };

/// Output label: "itsqp-exact", "itsqp-iterative", "ssqp-style".
std::string to_string(Variant variant);
/// Accepts the output labels plus "ssqp".
std::optional<Variant> parse_variant(const std::string& text);

struct BestIterateSummary {
  int k_best = 0;
  bool feasible = false;
  double kkt_inf = 0.0;
  double c_inf = 0.0;
};

/// Feasible iterates (|c|_inf <= 1e-6) are ranked by KKT error; without any,
/// the most feasible iterate wins. Ties go to the smaller k. logs must be
/// non-empty.
BestIterateSummary select_best(std::span<const IterationLog> logs);

/// |c|_inf <= 1e-6 and |grad f + J^T y_true|_inf <= 1e-4.
bool early_stop(const IterationLog& log);

/// Single-stepsize comparator: d = u + v, alpha = nu, same decomposition and
/// logging as run().
RunResult ssqp_baseline_run(const ProblemInstance& problem,
                            GradientOracle& oracle, const SolverConfig& config,
                            RunOptions options = {});

struct RunCoordinates {
  std::string problem;
  double noise = 0.0;
  double eta = 1.0;
  std::uint64_t seed = 0;
  Variant variant = Variant::itsqp_exact;
  int budget = 10000;
};

/// Seed of a run's private random stream, derived from all coordinates so a
/// sweep gives the same results in any execution order.
std::uint64_t stream_seed(const RunCoordinates& coords);

struct RunRecord {
  RunCoordinates coords;
  std::vector<IterationLog> logs;  // thinned; always holds k_best and the last
  BestIterateSummary best;
  bool terminated_early = false;
  double wall_ms = 0.0;
  int iterations = 0;
  double final_jtc = 0.0;
  double mean_jtc_sq = 0.0;  // (1/K) sum |J^T c|^2 over all iterations
  double mean_c_norm = 0.0;  // (1/K) sum |c| over all iterations
  double noise_variance_bound = 0.0;
  RunStatus status = RunStatus::ok;
  std::string failure_message;
};

struct RunSettings {
  int log_every = 1;       // 0 keeps only the best and last iterates
  bool early_stop = true;  // apply the protocol's termination test
};

/// Executes one run at the given coordinates. base.eta, base.K and the
/// tangential mode are overridden from the coordinates.
RunRecord execute_run(const ProblemInstance& problem,
                      const RunCoordinates& coords, const SolverConfig& base,
                      const RunSettings& settings = {});

struct ExperimentPlan {
  std::vector<std::string> problems;
  std::vector<double> noise_levels;
  std::vector<double> etas;
  std::vector<std::uint64_t> seeds;
  int budget = 10000;
  std::vector<Variant> variants;

  /// All corpus problems, noise {1e-4, ..., 1e-1}, beta {1e-4, ..., 1}
  /// expressed as eta = beta sqrt(K), 15 seeds, every variant.
  static ExperimentPlan protocol_defaults(int budget = 10000);

  std::size_t run_count() const;
  /// Coordinates in problem, noise, eta, seed, variant order.
  std::vector<RunCoordinates> coordinates() const;
  /// Throws std::invalid_argument for empty lists or unknown problems.
  void validate() const;
};

/// Runs every plan point on up to `threads` workers. Results follow plan order
/// regardless of scheduling.
std::vector<RunRecord> run_plan(const ExperimentPlan& plan,
                                const SolverConfig& base,
                                const RunSettings& settings = {},
                                unsigned threads = 0);

enum class RateMeasure { jtc_sq, c_norm };

struct RateRow {
  int budget = 0;
  double mean = 0.0;  // seed average of the running mean of the measure
  std::vector<double> per_seed;
};

struct RateTable {
  std::string problem;
  RateMeasure measure = RateMeasure::jtc_sq;
  std::vector<RateRow> rows;
  std::vector<double> ratios;  // rows[i+1].mean / rows[i].mean
};

/// Fresh runs with beta = eta / sqrt(K) for each budget K (no early stop),
/// averaged over seeds.
RateTable rate_check(const ProblemInstance& problem, const SolverConfig& base,
                     Variant variant, double noise, double eta,
                     const std::vector<std::uint64_t>& seeds,
                     const std::vector<int>& budgets, RateMeasure measure,
                     unsigned threads = 0);

struct CompareRow {
  std::string problem;
  Variant variant = Variant::itsqp_exact;
  int runs = 0;
  int early_stops = 0;
  int feasible = 0;
  double mean_best_c_inf = 0.0;
  double mean_best_kkt_inf = 0.0;
};

/// Arithmetic means per (problem, variant), in first-appearance order.
std::vector<CompareRow> compare_summary(std::span<const RunRecord> records);

}  // namespace itsqp
