// Command-line experiment runner for the two-stepsize stochastic SQP solver.
//
//   itsqp list-problems
//   itsqp run --problem P1 --noise 0 --iters 10000 --seed 7 --variant itsqp-exact
//   itsqp sweep [--problem P1 --problem P2 ...] [--noise ...] [--eta ...]
//   itsqp rate-check --problem P2 --measure jtc_sq --budgets 500,2000,8000
//   itsqp compare [same flags as sweep]
//
// Exit codes: 0 success, 1 solver failure or unwritable output, 2 bad arguments.

#include "itsqp/corpus.hpp"
#include "itsqp/driver.hpp"
#include "itsqp/harness.hpp"
#include "itsqp/report.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

namespace {

using namespace itsqp;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverFlags {
  double nu = 0.5;
  double theta = 0.1;
  double omega = 1.0;
  double eps_v = 1.0;
  double sigma = 0.5;
  double eps_tau = 0.1;
  double gamma_r = 1e-8;
  double gamma_rho = 1.0;
  std::string alpha_rule = "upper";
  int log_every = 1;
  std::string out;
  std::string format = "csv";
  unsigned threads = 0;
};

void add_solver_flags(CLI::App* app, SolverFlags& f) {
  app->add_option("--alpha-nu", f.nu, "base of the alpha interval")->capture_default_str();
  app->add_option("--alpha-theta", f.theta, "width factor of the alpha interval")->capture_default_str();
  app->add_option("--omega", f.omega, "normal-step trust scale")->capture_default_str();
  app->add_option("--epsv", f.eps_v, "Cauchy decrease fraction")->capture_default_str();
  app->add_option("--sigma", f.sigma, "merit model-reduction fraction")->capture_default_str();
  app->add_option("--epstau", f.eps_tau, "merit decrease factor")->capture_default_str();
  app->add_option("--gamma-r", f.gamma_r, "constraint residual tolerance factor")->capture_default_str();
  app->add_option("--gamma-rho", f.gamma_rho, "dual residual tolerance factor")->capture_default_str();
  app->add_option("--alpha-rule", f.alpha_rule, "alpha selection within the interval")
      ->check(CLI::IsMember({"lower", "upper", "midpoint"}))
      ->capture_default_str();
  app->add_option("--log-every", f.log_every, "keep every n-th iterate in trajectories")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app->add_option("--out", f.out, "output file (stdout when omitted)");
  app->add_option("--format", f.format, "output format")
      ->check(CLI::IsMember({"csv", "jsonl"}))
      ->capture_default_str();
  app->add_option("--threads", f.threads, "worker threads (0: hardware)");
}

SolverConfig make_config(const SolverFlags& f) {
  SolverConfig config;
  config.nu = f.nu;
  config.theta = f.theta;
  config.omega = f.omega;
  config.eps_v = f.eps_v;
  config.sigma = f.sigma;
  config.eps_tau = f.eps_tau;
  config.gamma_r = f.gamma_r;
  config.gamma_rho = f.gamma_rho;
  config.alpha_rule = f.alpha_rule == "lower"   ? AlphaRule::lower
                      : f.alpha_rule == "upper" ? AlphaRule::upper
                                                : AlphaRule::midpoint;
  return config;
}

std::string valid_names() {
  std::string names;
  for (const auto& n : corpus_names()) names += (names.empty() ? "" : ", ") + n;
  return names;
}

const ProblemInstance& require_problem(const std::string& name) {
  const ProblemInstance* p = find_problem(name);
  if (!p) throw UsageError("unknown problem '" + name + "'; valid names: " + valid_names());
  return *p;
}

Variant require_variant(const std::string& text) {
  auto v = parse_variant(text);
  if (!v) throw UsageError("unknown variant '" + text + "'");
  return *v;
}

// Writes through `emit` to the file at `path`, or stdout when empty. Returns
// false when the file cannot be written.
template <typename Emit>
bool write_output(const std::string& path, Emit&& emit) {
  if (path.empty()) {
    emit(std::cout);
    std::cout.flush();
    return static_cast<bool>(std::cout);
  }
  std::ofstream file(path);
  if (!file) {
    std::cerr << "error: cannot open '" << path << "' for writing\n";
    return false;
  }
  emit(file);
  file.flush();
  if (!file) {
    std::cerr << "error: failed writing '" << path << "'\n";
    return false;
  }
  return true;
}

bool any_failed(std::span<const RunRecord> records) {
  bool failed = false;
  for (const auto& r : records) {
    if (r.status != RunStatus::ok) {
      std::cerr << "run " << r.coords.problem << " seed " << r.coords.seed << " "
                << to_string(r.coords.variant) << " failed: " << r.failure_message
                << '\n';
      failed = true;
    }
  }
  return failed;
}

bool write_records(const SolverFlags& flags, std::span<const RunRecord> records) {
  return write_output(flags.out, [&](std::ostream& os) {
    if (flags.format == "jsonl") {
      for (const auto& r : records) write_trajectory_jsonl(os, r);
    } else {
      emit_summary(os, records);
    }
  });
}

struct SweepFlags {
  std::vector<std::string> problems;
  std::vector<double> noise;
  std::vector<double> etas;
  std::vector<double> betas;
  std::vector<std::string> variants;
  int iters = 10000;
  std::uint64_t seed = 1;
  int seeds = 15;
};

void add_sweep_flags(CLI::App* app, SweepFlags& s) {
  app->add_option("--problem", s.problems, "problem names (default: whole corpus)")->delimiter(',');
  app->add_option("--noise", s.noise, "noise variances")->delimiter(',');
  app->add_option("--eta", s.etas, "beta scales eta, beta = eta / sqrt(K)")->delimiter(',');
  app->add_option("--beta", s.betas, "fixed beta values, converted to eta = beta sqrt(K)")
      ->delimiter(',')
      ->excludes("--eta");
  app->add_option("--variant", s.variants, "solver variants")->delimiter(',');
  app->add_option("--iters", s.iters, "iteration budget K")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--seed", s.seed, "first seed")->capture_default_str();
  app->add_option("--seeds", s.seeds, "number of seeds")->check(CLI::PositiveNumber)->capture_default_str();
}

ExperimentPlan make_plan(const SweepFlags& s) {
  ExperimentPlan plan = ExperimentPlan::protocol_defaults(s.iters);
  if (!s.problems.empty()) {
    for (const auto& name : s.problems) require_problem(name);
    plan.problems = s.problems;
  }
  if (!s.noise.empty()) plan.noise_levels = s.noise;
  if (!s.etas.empty()) plan.etas = s.etas;
  if (!s.betas.empty()) {
    plan.etas.clear();
    for (double b : s.betas) plan.etas.push_back(b * std::sqrt(static_cast<double>(s.iters)));
  }
  plan.seeds.clear();
  for (int i = 0; i < s.seeds; ++i) plan.seeds.push_back(s.seed + static_cast<std::uint64_t>(i));
  if (!s.variants.empty()) {
    plan.variants.clear();
    for (const auto& v : s.variants) plan.variants.push_back(require_variant(v));
  }
  return plan;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Two-stepsize stochastic SQP experiment runner"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list-problems", "print corpus metadata as JSON");

  SolverFlags run_flags;
  std::string run_problem;
  double run_noise = 0.0;
  double run_eta = 1.0;
  int run_iters = 10000;
  std::uint64_t run_seed = 0;
  std::string run_variant = "itsqp-exact";
  auto* run_cmd = app.add_subcommand("run", "single solver run");
  run_cmd->add_option("--problem", run_problem, "problem name")->required();
  run_cmd->add_option("--noise", run_noise, "gradient noise variance")->capture_default_str();
  run_cmd->add_option("--eta", run_eta, "beta scale, beta = eta / sqrt(K)")->capture_default_str();
  run_cmd->add_option("--iters", run_iters, "iteration budget K")->check(CLI::PositiveNumber)->capture_default_str();
  run_cmd->add_option("--seed", run_seed, "seed")->capture_default_str();
  run_cmd->add_option("--variant", run_variant, "itsqp-exact | itsqp-iterative | ssqp")->capture_default_str();
  add_solver_flags(run_cmd, run_flags);

  SolverFlags sweep_flags;
  SweepFlags sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "full experiment plan, one CSV row per run");
  add_sweep_flags(sweep_cmd, sweep);
  add_solver_flags(sweep_cmd, sweep_flags);

  SolverFlags compare_flags;
  SweepFlags compare;
  auto* compare_cmd = app.add_subcommand("compare", "sweep over variants with a summary table");
  add_sweep_flags(compare_cmd, compare);
  add_solver_flags(compare_cmd, compare_flags);

  SolverFlags rate_flags;
  std::string rate_problem;
  double rate_noise = 1e-2;
  double rate_eta = 1.0;
  std::uint64_t rate_seed = 1;
  int rate_seeds = 10;
  std::vector<int> budgets{500, 2000, 8000};
  std::string measure = "jtc_sq";
  std::string rate_variant = "itsqp-exact";
  auto* rate_cmd = app.add_subcommand("rate-check", "seed-averaged running means over growing budgets");
  rate_cmd->add_option("--problem", rate_problem, "problem name")->required();
  rate_cmd->add_option("--noise", rate_noise, "gradient noise variance")->capture_default_str();
  rate_cmd->add_option("--eta", rate_eta, "beta scale")->capture_default_str();
  rate_cmd->add_option("--seed", rate_seed, "first seed")->capture_default_str();
  rate_cmd->add_option("--seeds", rate_seeds, "number of seeds")->check(CLI::PositiveNumber)->capture_default_str();
  rate_cmd->add_option("--budgets", budgets, "iteration budgets")->delimiter(',')->capture_default_str();
  rate_cmd->add_option("--measure", measure, "jtc_sq | c_norm")
      ->check(CLI::IsMember({"jtc_sq", "c_norm"}))
      ->capture_default_str();
  rate_cmd->add_option("--variant", rate_variant, "solver variant")->capture_default_str();
  add_solver_flags(rate_cmd, rate_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (list->parsed()) {
    std::cout << corpus_metadata().dump(2) << '\n';
    return kExitOk;
  }

  if (run_cmd->parsed()) {
    const ProblemInstance& problem = require_problem(run_problem);
    const RunCoordinates coords{problem.name, run_noise, run_eta, run_seed,
                                require_variant(run_variant), run_iters};
    SolverConfig config = make_config(run_flags);
    config.eta = run_eta;
    config.K = run_iters;
    config.validate();
    RunSettings settings;
    settings.log_every = run_flags.log_every;
    const RunRecord record = execute_run(problem, coords, config, settings);
    const std::span<const RunRecord> one(&record, 1);
    if (!write_records(run_flags, one)) return kExitFailure;
    return any_failed(one) ? kExitFailure : kExitOk;
  }

  if (sweep_cmd->parsed() || compare_cmd->parsed()) {
    const bool is_sweep = sweep_cmd->parsed();
    const SweepFlags& s = is_sweep ? sweep : compare;
    const SolverFlags& f = is_sweep ? sweep_flags : compare_flags;
    const ExperimentPlan plan = make_plan(s);
    SolverConfig config = make_config(f);
    for (double eta : plan.etas) {
      config.eta = eta;
      config.K = plan.budget;
      config.validate();
    }
    RunSettings settings;
    settings.log_every = f.format == "jsonl" ? f.log_every : 0;
    const auto records = run_plan(plan, config, settings, f.threads);
    bool ok = true;
    if (is_sweep) {
      ok = write_records(f, records);
    } else {
      const auto rows = compare_summary(records);
      emit_compare(std::cout, rows);
      if (!f.out.empty()) ok = write_records(f, records);
    }
    if (!ok) return kExitFailure;
    return any_failed(records) ? kExitFailure : kExitOk;
  }

  if (rate_cmd->parsed()) {
    const ProblemInstance& problem = require_problem(rate_problem);
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < rate_seeds; ++i) seeds.push_back(rate_seed + static_cast<std::uint64_t>(i));
    SolverConfig config = make_config(rate_flags);
    for (int K : budgets) {
      if (K <= 0) throw UsageError("budgets must be positive");
      config.eta = rate_eta;
      config.K = K;
      config.validate();
    }
    const RateTable table =
        rate_check(problem, config, require_variant(rate_variant), rate_noise, rate_eta, seeds,
                   budgets, measure == "jtc_sq" ? RateMeasure::jtc_sq : RateMeasure::c_norm,
                   rate_flags.threads);
    return write_output(rate_flags.out, [&](std::ostream& os) { emit_rate_table(os, table); })
               ? kExitOk
               : kExitFailure;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: invalid configuration: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
