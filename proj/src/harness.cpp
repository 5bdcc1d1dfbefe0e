#include "itsqp/harness.hpp"

#include "itsqp/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <thread>

namespace itsqp {

std::string to_string(Variant variant) {
  switch (variant) {
    case Variant::itsqp_exact:
      return "itsqp-exact";
    case Variant::itsqp_iterative:
      return "itsqp-iterative";
    case Variant::ssqp:
      return "ssqp-style";
  }
  return "unknown";
}

std::optional<Variant> parse_variant(const std::string& text) {
  if (text == "itsqp-exact") return Variant::itsqp_exact;
  if (text == "itsqp-iterative") return Variant::itsqp_iterative;
  if (text == "ssqp" || text == "ssqp-style") return Variant::ssqp;
  return std::nullopt;
}

BestIterateSummary select_best(std::span<const IterationLog> logs) {
  if (logs.empty()) throw std::invalid_argument("select_best needs at least one log");
  const IterationLog* best = nullptr;
  for (const auto& log : logs) {
    if (log.c_inf_norm > kFeasibilityTol) continue;
    if (!best || log.kkt_inf_norm < best->kkt_inf_norm ||
        (log.kkt_inf_norm == best->kkt_inf_norm && log.k < best->k)) {
      best = &log;
    }
  }
  const bool feasible = best != nullptr;
  if (!feasible) {
    for (const auto& log : logs) {
      if (!best || log.c_inf_norm < best->c_inf_norm ||
          (log.c_inf_norm == best->c_inf_norm && log.k < best->k)) {
        best = &log;
      }
    }
  }
  return {best->k, feasible, best->kkt_inf_norm, best->c_inf_norm};
}

bool early_stop(const IterationLog& log) {
  return log.c_inf_norm <= kFeasibilityTol && log.kkt_inf_norm <= kKktTol;
}

RunResult ssqp_baseline_run(const ProblemInstance& problem,
                            GradientOracle& oracle, const SolverConfig& config,
                            RunOptions options) {
  options.law = StepLaw::single_stepsize;
  return run(problem, oracle, config, options);
}

namespace {

// FNV-1a over a canonical text form, then a splitmix64 finaliser.
std::uint64_t hash_text(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

std::vector<IterationLog> thin(std::vector<IterationLog>&& logs, int log_every,
                               int k_best) {
  if (logs.empty()) return {};
  const int last = logs.back().k;
  std::vector<IterationLog> kept;
  for (auto& log : logs) {
    const bool keep = (log_every > 0 && log.k % log_every == 0) ||
                      log.k == k_best || log.k == last;
    if (keep) kept.push_back(std::move(log));
  }
  return kept;
}

}  // namespace

std::uint64_t stream_seed(const RunCoordinates& coords) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "|%.17g|%.17g|", coords.noise, coords.eta);
  return hash_text(std::to_string(coords.seed) + "|" + coords.problem + buf +
                   to_string(coords.variant));
}

RunRecord execute_run(const ProblemInstance& problem,
                      const RunCoordinates& coords, const SolverConfig& base,
                      const RunSettings& settings) {
  SolverConfig config = base;
  config.eta = coords.eta;
  config.K = coords.budget;
  switch (coords.variant) {
    case Variant::itsqp_exact:
    case Variant::ssqp:
      config.tangential_mode = TangentialMode::exact;
      break;
    case Variant::itsqp_iterative:
      config.tangential_mode = TangentialMode::iterative;
      break;
  }

  GradientOracle oracle(problem, NoiseSpec{coords.noise, stream_seed(coords)});
  RunOptions options;
  if (settings.early_stop) options.stop = [](const IterationLog& log) { return early_stop(log); };

  const auto start = std::chrono::steady_clock::now();
  RunResult result = coords.variant == Variant::ssqp
                         ? ssqp_baseline_run(problem, oracle, config, options)
                         : run(problem, oracle, config, options);
  const auto stop = std::chrono::steady_clock::now();

  RunRecord record;
  record.coords = coords;
  record.wall_ms =
      std::chrono::duration<double, std::milli>(stop - start).count();
  record.terminated_early = result.stopped_early;
  record.iterations = result.iterations();
  record.noise_variance_bound = result.noise_variance_bound;
  record.status = result.status;
  record.failure_message = result.failure_message;
  if (!result.logs.empty()) {
    record.best = select_best(result.logs);
    record.final_jtc = result.logs.back().jtc_norm;
    double jtc_sq = 0.0;
    double c_norm = 0.0;
    for (const auto& log : result.logs) {
      jtc_sq += log.jtc_norm * log.jtc_norm;
      c_norm += log.c_norm;
    }
    record.mean_jtc_sq = jtc_sq / static_cast<double>(result.logs.size());
    record.mean_c_norm = c_norm / static_cast<double>(result.logs.size());
  }
  record.logs = thin(std::move(result.logs), settings.log_every, record.best.k_best);
  return record;
}

ExperimentPlan ExperimentPlan::protocol_defaults(int budget) {
  ExperimentPlan plan;
  plan.problems = corpus_names();
  plan.noise_levels = {1e-4, 1e-3, 1e-2, 1e-1};
  for (double beta : {1e-4, 1e-3, 1e-2, 1e-1, 1.0})
    plan.etas.push_back(beta * std::sqrt(static_cast<double>(budget)));
  for (std::uint64_t s = 1; s <= 15; ++s) plan.seeds.push_back(s);
  plan.budget = budget;
  plan.variants = {Variant::itsqp_exact, Variant::itsqp_iterative, Variant::ssqp};
  return plan;
}

std::size_t ExperimentPlan::run_count() const {
  return problems.size() * noise_levels.size() * etas.size() * seeds.size() *
         variants.size();
}

std::vector<RunCoordinates> ExperimentPlan::coordinates() const {
  std::vector<RunCoordinates> out;
  out.reserve(run_count());
  for (const auto& problem : problems)
    for (double noise : noise_levels)
      for (double eta : etas)
        for (auto seed : seeds)
          for (auto variant : variants)
            out.push_back({problem, noise, eta, seed, variant, budget});
  return out;
}

void ExperimentPlan::validate() const {
  if (problems.empty() || noise_levels.empty() || etas.empty() ||
      seeds.empty() || variants.empty()) {
    throw std::invalid_argument("experiment plan lists must be non-empty");
  }
  if (budget <= 0) throw std::invalid_argument("budget must be positive");
  for (const auto& name : problems)
    if (!find_problem(name)) throw std::invalid_argument("unknown problem: " + name);
}

namespace {

std::vector<RunRecord> run_all(const std::vector<RunCoordinates>& coords,
                               const SolverConfig& base,
                               const RunSettings& settings, unsigned threads) {
  std::vector<RunRecord> records(coords.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(coords.size()));
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < coords.size(); i = next++) {
      const ProblemInstance* problem = find_problem(coords[i].problem);
      records[i] = execute_run(*problem, coords[i], base, settings);
    }
  };
  if (threads <= 1) {
    worker();
    return records;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return records;
}

}  // namespace

std::vector<RunRecord> run_plan(const ExperimentPlan& plan,
                                const SolverConfig& base,
                                const RunSettings& settings, unsigned threads) {
  plan.validate();
  return run_all(plan.coordinates(), base, settings, threads);
}

RateTable rate_check(const ProblemInstance& problem, const SolverConfig& base,
                     Variant variant, double noise, double eta,
                     const std::vector<std::uint64_t>& seeds,
                     const std::vector<int>& budgets, RateMeasure measure,
                     unsigned threads) {
  if (seeds.empty() || budgets.empty())
    throw std::invalid_argument("rate_check needs seeds and budgets");
  std::vector<RunCoordinates> coords;
  for (int budget : budgets)
    for (auto seed : seeds)
      coords.push_back({problem.name, noise, eta, seed, variant, budget});
  RunSettings settings;
  settings.log_every = 0;
  settings.early_stop = false;
  const std::vector<RunRecord> records = run_all(coords, base, settings, threads);

  RateTable table;
  table.problem = problem.name;
  table.measure = measure;
  std::size_t i = 0;
  for (int budget : budgets) {
    RateRow row;
    row.budget = budget;
    for (std::size_t s = 0; s < seeds.size(); ++s, ++i) {
      const RunRecord& rec = records[i];
      if (rec.status != RunStatus::ok) {
        throw std::runtime_error("rate_check run failed: " + rec.failure_message);
      }
      row.per_seed.push_back(measure == RateMeasure::jtc_sq ? rec.mean_jtc_sq
                                                            : rec.mean_c_norm);
    }
    double sum = 0.0;
    for (double v : row.per_seed) sum += v;
    row.mean = sum / static_cast<double>(row.per_seed.size());
    table.rows.push_back(std::move(row));
  }
  for (std::size_t r = 1; r < table.rows.size(); ++r)
    table.ratios.push_back(table.rows[r].mean / table.rows[r - 1].mean);
  return table;
}

std::vector<CompareRow> compare_summary(std::span<const RunRecord> records) {
  std::vector<CompareRow> rows;
  std::map<std::pair<std::string, Variant>, std::size_t> index;
  for (const auto& rec : records) {
    const auto key = std::make_pair(rec.coords.problem, rec.coords.variant);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, rows.size()).first;
      CompareRow row;
      row.problem = rec.coords.problem;
      row.variant = rec.coords.variant;
      rows.push_back(row);
    }
    CompareRow& row = rows[it->second];
    ++row.runs;
    row.early_stops += rec.terminated_early ? 1 : 0;
    row.feasible += rec.best.feasible ? 1 : 0;
    row.mean_best_c_inf += rec.best.c_inf;
    row.mean_best_kkt_inf += rec.best.kkt_inf;
  }
  for (auto& row : rows) {
    row.mean_best_c_inf /= row.runs;
    row.mean_best_kkt_inf /= row.runs;
  }
  return rows;
}

}  // namespace itsqp
