#include "itsqp/corpus.hpp"
#include "itsqp/harness.hpp"
#include "itsqp/report.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

using namespace itsqp;

namespace {

IterationLog entry(int k, double c_inf, double kkt) {
  IterationLog log;
  log.k = k;
  log.c_inf_norm = c_inf;
  log.kkt_inf_norm = kkt;
  return log;
}

// The selection rule, restated over (c_inf, kkt) pairs for the property test.
int reference_best(const std::vector<IterationLog>& logs) {
  int best = -1;
  for (const auto& l : logs)
    if (l.c_inf_norm <= 1e-6 && (best < 0 || l.kkt_inf_norm < logs[best].kkt_inf_norm))
      best = l.k;
  if (best >= 0) return best;
  best = 0;
  for (const auto& l : logs)
    if (l.c_inf_norm < logs[best].c_inf_norm) best = l.k;
  return best;
}

std::string strip_wall_ms(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

}  // namespace

TEST(SelectBest, FeasibleLowestKkt) {
  const std::vector<IterationLog> logs = {entry(0, 1e-7, 0.5), entry(1, 1e-8, 0.2),
                                          entry(2, 0.3, 1e-9)};
  const auto best = select_best(logs);
  EXPECT_EQ(best.k_best, 1);
  EXPECT_TRUE(best.feasible);
  EXPECT_EQ(best.kkt_inf, 0.2);
  EXPECT_EQ(best.c_inf, 1e-8);
}

TEST(SelectBest, MostFeasibleWithoutFeasibleIterates) {
  const std::vector<IterationLog> logs = {entry(0, 0.1, 0.0), entry(1, 1e-3, 5.0),
                                          entry(2, 2e-3, 1e-9)};
  const auto best = select_best(logs);
  EXPECT_EQ(best.k_best, 1);
  EXPECT_FALSE(best.feasible);
}

TEST(SelectBest, SingleEntryAndTies) {
  const std::vector<IterationLog> one = {entry(0, 5.0, 5.0)};
  EXPECT_EQ(select_best(one).k_best, 0);
  const std::vector<IterationLog> tie = {entry(0, 1e-7, 0.1), entry(1, 1e-9, 0.1)};
  EXPECT_EQ(select_best(tie).k_best, 0);
  const std::vector<IterationLog> tie_c = {entry(0, 0.5, 0.1), entry(1, 0.5, 0.0)};
  EXPECT_EQ(select_best(tie_c).k_best, 0);
  EXPECT_THROW(select_best(std::vector<IterationLog>{}), std::invalid_argument);
}

TEST(SelectBest, AgreesWithReferenceOnRandomLogs) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> exponent(-9, 0);
  for (int t = 0; t < 500; ++t) {
    std::vector<IterationLog> logs;
    const int n = 1 + static_cast<int>(rng() % 20);
    for (int k = 0; k < n; ++k)
      logs.push_back(entry(k, std::pow(10.0, exponent(rng)), std::pow(10.0, exponent(rng))));
    EXPECT_EQ(select_best(logs).k_best, reference_best(logs));
  }
}

TEST(EarlyStop, Thresholds) {
  EXPECT_TRUE(early_stop(entry(0, 1e-7, 5e-5)));
  EXPECT_FALSE(early_stop(entry(0, 1e-5, 1e-9)));
  EXPECT_TRUE(early_stop(entry(0, 0, 0)));
  EXPECT_FALSE(early_stop(entry(0, 0, 2e-4)));
}

TEST(Variant, LabelsRoundTrip) {
  for (auto v : {Variant::itsqp_exact, Variant::itsqp_iterative, Variant::ssqp})
    EXPECT_EQ(parse_variant(to_string(v)), v);
  EXPECT_EQ(parse_variant("ssqp"), Variant::ssqp);
  EXPECT_EQ(to_string(Variant::ssqp), "ssqp-style");
  EXPECT_FALSE(parse_variant("sqp"));
}

TEST(Baseline, UnitBetaAndFixedAlpha) {
  const ProblemInstance& p = *find_problem("P2");
  GradientOracle oracle(p, {1e-2, 9});
  SolverConfig c;
  c.K = 50;
  const RunResult r = ssqp_baseline_run(p, oracle, c);
  ASSERT_EQ(r.iterations(), 50);
  for (const auto& log : r.logs) {
    EXPECT_EQ(log.beta, 1.0);
    EXPECT_EQ(log.alpha, c.nu);
    EXPECT_EQ(log.d, (log.u + log.v).eval());
  }
}

TEST(Baseline, ReachesTheP1Solution) {
  const ProblemInstance& p = *find_problem("P1");
  RunCoordinates coords{"P1", 0.0, 1.0, 1, Variant::ssqp, 10000};
  const RunRecord rec = execute_run(p, coords, SolverConfig{});
  EXPECT_TRUE(rec.terminated_early);
  EXPECT_TRUE(rec.best.feasible);
  const RunRecord itsqp = execute_run(p, {"P1", 0.0, 1.0, 1, Variant::itsqp_exact, 10000},
                                      SolverConfig{});
  EXPECT_TRUE(itsqp.terminated_early);
  EXPECT_LE((rec.logs.back().x - itsqp.logs.back().x).norm(), 1e-3);
}

TEST(Streams, SeedsDependOnEveryCoordinate) {
  const RunCoordinates base{"P1", 1e-2, 1.0, 1, Variant::itsqp_exact, 100};
  std::set<std::uint64_t> seeds{stream_seed(base)};
  auto c = base;
  c.problem = "P2";
  seeds.insert(stream_seed(c));
  c = base;
  c.noise = 1e-3;
  seeds.insert(stream_seed(c));
  c = base;
  c.eta = 2.0;
  seeds.insert(stream_seed(c));
  c = base;
  c.seed = 2;
  seeds.insert(stream_seed(c));
  c = base;
  c.variant = Variant::ssqp;
  seeds.insert(stream_seed(c));
  EXPECT_EQ(seeds.size(), 6u);
  EXPECT_EQ(stream_seed(base), stream_seed(base));
}

TEST(Plan, DefaultsAndCounts) {
  const auto plan = ExperimentPlan::protocol_defaults(10000);
  EXPECT_EQ(plan.noise_levels, (std::vector<double>{1e-4, 1e-3, 1e-2, 1e-1}));
  ASSERT_EQ(plan.etas.size(), 5u);
  EXPECT_DOUBLE_EQ(plan.etas[0] / 100.0, 1e-4);
  EXPECT_DOUBLE_EQ(plan.etas[4] / 100.0, 1.0);
  EXPECT_EQ(plan.seeds.size(), 15u);
  EXPECT_EQ(plan.run_count(), plan.problems.size() * 4 * 5 * 15 * 3);
  EXPECT_EQ(plan.coordinates().size(), plan.run_count());

  ExperimentPlan empty = plan;
  empty.seeds.clear();
  EXPECT_THROW(empty.validate(), std::invalid_argument);
  ExperimentPlan unknown = plan;
  unknown.problems = {"Q9"};
  EXPECT_THROW(unknown.validate(), std::invalid_argument);
}

TEST(Plan, ResultsIndependentOfThreadCount) {
  ExperimentPlan plan;
  plan.problems = {"P1", "R3", "R7"};
  plan.noise_levels = {1e-2};
  plan.etas = {1.0};
  plan.seeds = {1, 2};
  plan.budget = 300;
  plan.variants = {Variant::itsqp_exact, Variant::itsqp_iterative, Variant::ssqp};
  RunSettings settings;
  settings.log_every = 0;
  const auto serial = run_plan(plan, SolverConfig{}, settings, 1);
  const auto parallel = run_plan(plan, SolverConfig{}, settings, 4);
  ASSERT_EQ(serial.size(), plan.run_count());
  std::ostringstream a, b;
  emit_summary(a, serial);
  emit_summary(b, parallel);
  EXPECT_EQ(strip_wall_ms(a.str()), strip_wall_ms(b.str()));
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].coords.problem, plan.coordinates()[i].problem);
    // Step law matches the label.
    for (const auto& log : serial[i].logs) {
      if (serial[i].coords.variant == Variant::ssqp)
        EXPECT_EQ(log.beta, 1.0);
      else
        EXPECT_DOUBLE_EQ(log.beta, 1.0 / std::sqrt(300.0));
    }
  }
}

TEST(Record, ThinningKeepsBestAndLast) {
  const ProblemInstance& p = *find_problem("R6");
  RunSettings settings;
  settings.log_every = 7;
  settings.early_stop = false;
  const RunRecord rec =
      execute_run(p, {"R6", 1e-3, 1.0, 4, Variant::itsqp_exact, 100}, SolverConfig{}, settings);
  EXPECT_EQ(rec.iterations, 100);
  bool has_best = false;
  for (const auto& log : rec.logs) {
    EXPECT_TRUE(log.k % 7 == 0 || log.k == rec.best.k_best || log.k == 99);
    has_best |= log.k == rec.best.k_best;
  }
  EXPECT_TRUE(has_best);
  EXPECT_EQ(rec.logs.back().k, 99);
}

TEST(Report, EmptySummaryIsHeaderOnly) {
  std::ostringstream os;
  emit_summary(os, std::vector<RunRecord>{});
  EXPECT_EQ(os.str(),
            "problem,noise,eta,seed,variant,K_used,best_k,best_c_inf,best_kkt_inf,"
            "final_jtc,wall_ms\n");
}

TEST(Report, P1RowAndRepeatability) {
  const ProblemInstance& p = *find_problem("P1");
  const RunCoordinates coords{"P1", 0.0, 1.0, 7, Variant::itsqp_exact, 10000};
  const std::vector<RunRecord> recs = {execute_run(p, coords, SolverConfig{}),
                                       execute_run(p, coords, SolverConfig{})};
  EXPECT_LE(recs[0].best.c_inf, 1e-6);
  std::ostringstream os;
  emit_summary(os, recs);
  std::istringstream in(strip_wall_ms(os.str()));
  std::string header, r1, r2;
  std::getline(in, header);
  std::getline(in, r1);
  std::getline(in, r2);
  EXPECT_EQ(r1, r2);
  EXPECT_EQ(r1.rfind("P1,0,1,7,itsqp-exact,", 0), 0u) << r1;
}

TEST(Report, FormatDoubleRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456789.123456789, -2.5e-7}) {
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
}

TEST(Report, JsonlRoundTripReproducesBest) {
  const ProblemInstance& p = *find_problem("R2");
  const RunRecord rec = execute_run(p, {"R2", 1e-2, 1.0, 3, Variant::itsqp_iterative, 200},
                                    SolverConfig{});
  std::stringstream ss;
  write_trajectory_jsonl(ss, rec);
  const auto logs = read_trajectory_jsonl(ss);
  ASSERT_EQ(logs.size(), rec.logs.size());
  const auto best = select_best(logs);
  EXPECT_EQ(best.k_best, rec.best.k_best);
  EXPECT_EQ(best.kkt_inf, rec.best.kkt_inf);
  EXPECT_EQ(best.c_inf, rec.best.c_inf);
  EXPECT_EQ(logs.front().x, rec.logs.front().x);
  EXPECT_EQ(logs.back().d, rec.logs.back().d);
}

TEST(Report, JsonlCarriesCoordinates) {
  const ProblemInstance& p = *find_problem("P3");
  const RunRecord rec =
      execute_run(p, {"P3", 1e-2, 1.0, 2, Variant::ssqp, 3}, SolverConfig{});
  std::stringstream ss;
  write_trajectory_jsonl(ss, rec);
  std::string line;
  std::getline(ss, line);
  const auto j = nlohmann::json::parse(line);
  EXPECT_EQ(j["problem"], "P3");
  EXPECT_EQ(j["variant"], "ssqp-style");
  EXPECT_EQ(j["seed"], 2);
  EXPECT_EQ(j["k"], 0);
}

TEST(RateCheck, SingleBudgetHasNoRatios) {
  const auto table = rate_check(*find_problem("P2"), SolverConfig{}, Variant::itsqp_exact,
                                1e-2, 1.0, {1, 2, 3, 4, 5}, {200}, RateMeasure::jtc_sq, 1);
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_TRUE(table.ratios.empty());
  EXPECT_EQ(table.rows[0].per_seed.size(), 5u);
  std::ostringstream os;
  emit_rate_table(os, table);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "problem,measure,K,mean,ratio_to_previous");
}

TEST(Compare, ArithmeticMeansPerVariant) {
  std::vector<RunRecord> recs(3);
  recs[0].coords = {"P1", 0, 1, 1, Variant::itsqp_exact, 10};
  recs[0].best = {0, true, 1.0, 0.0};
  recs[1].coords = {"P1", 0, 1, 2, Variant::itsqp_exact, 10};
  recs[1].best = {0, false, 3.0, 4.0};
  recs[1].terminated_early = true;
  recs[2].coords = {"P1", 0, 1, 1, Variant::ssqp, 10};
  recs[2].best = {0, true, 5.0, 0.0};
  const auto rows = compare_summary(recs);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].runs, 2);
  EXPECT_EQ(rows[0].feasible, 1);
  EXPECT_EQ(rows[0].early_stops, 1);
  EXPECT_DOUBLE_EQ(rows[0].mean_best_kkt_inf, 2.0);
  EXPECT_DOUBLE_EQ(rows[0].mean_best_c_inf, 2.0);
  EXPECT_EQ(rows[1].variant, Variant::ssqp);
}
