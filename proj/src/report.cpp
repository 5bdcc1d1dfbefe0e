#include "itsqp/report.hpp"

#include "itsqp/corpus.hpp"

#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>

namespace itsqp {

using nlohmann::json;

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string summary_row(const RunRecord& r) {
  std::string row;
  row += r.coords.problem;
  row += ',' + format_double(r.coords.noise);
  row += ',' + format_double(r.coords.eta);
  row += ',' + std::to_string(r.coords.seed);
  row += ',' + to_string(r.coords.variant);
  row += ',' + std::to_string(r.iterations);
  row += ',' + std::to_string(r.best.k_best);
  row += ',' + format_double(r.best.c_inf);
  row += ',' + format_double(r.best.kkt_inf);
  row += ',' + format_double(r.final_jtc);
  row += ',' + format_double(r.wall_ms);
  return row;
}

void emit_summary(std::ostream& out, std::span<const RunRecord> records) {
  out << kSummaryHeader << '\n';
  for (const auto& r : records) out << summary_row(r) << '\n';
}

json problem_metadata(const ProblemInstance& p) {
  json j;
  j["name"] = p.name;
  j["n"] = p.n;
  j["m"] = p.m;
  j["licq_everywhere"] = p.licq_everywhere;
  j["feasible"] = p.feasible;
  j["jacobian_rank"] = p.jacobian_rank;
  j["description"] = p.description;
  if (p.known_solution) {
    j["known_solution"] = std::vector<double>(p.known_solution->begin(),
                                              p.known_solution->end());
  } else {
    j["known_solution"] = nullptr;
  }
  return j;
}

json corpus_metadata() {
  json arr = json::array();
  for (const auto& p : corpus_problems()) arr.push_back(problem_metadata(p));
  return arr;
}

namespace {

json to_array(const Vector& v) { return std::vector<double>(v.begin(), v.end()); }

Vector from_array(const json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

double number(const json& j, const char* key) {
  const json& value = j.at(key);
  return value.is_null() ? std::numeric_limits<double>::quiet_NaN()
                         : value.get<double>();
}

}  // namespace

json iteration_to_json(const IterationLog& log) {
  json j;
  j["k"] = log.k;
  j["x"] = to_array(log.x);
  j["f_val"] = log.f_val;
  j["c_norm"] = log.c_norm;
  j["c_inf_norm"] = log.c_inf_norm;
  j["jtc_norm"] = log.jtc_norm;
  j["v"] = to_array(log.v);
  j["u"] = to_array(log.u);
  j["d"] = to_array(log.d);
  j["beta"] = log.beta;
  j["alpha"] = log.alpha;
  j["rho_norm"] = log.rho_norm;
  j["r_norm"] = log.r_norm;
  j["normal_inner_iterations"] = log.normal_inner_iterations;
  j["tangential_inner_iterations"] = log.tangential_inner_iterations;
  j["tangential_exact_fallback"] = log.tangential_exact_fallback;
  j["tau"] = log.tau;
  j["tau_trial"] = log.tau_trial;
  j["merit_q"] = log.merit_q;
  j["normal_reduction"] = log.normal_reduction;
  j["cauchy_reduction"] = log.cauchy_reduction;
  j["true_model_reduction"] = log.true_model_reduction;
  j["true_uhu"] = log.true_uhu;
  j["normal_decrease_constant"] = log.normal_decrease_constant;
  j["kkt_residual"] = log.kkt_residual;
  j["kkt_inf_norm"] = log.kkt_inf_norm;
  j["smallest_nonzero_singular_value"] = log.smallest_nonzero_singular_value;
  return j;
}

IterationLog iteration_from_json(const json& j) {
  IterationLog log;
  log.k = j.at("k").get<int>();
  log.x = from_array(j.at("x"));
  log.f_val = number(j, "f_val");
  log.c_norm = number(j, "c_norm");
  log.c_inf_norm = number(j, "c_inf_norm");
  log.jtc_norm = number(j, "jtc_norm");
  log.v = from_array(j.at("v"));
  log.u = from_array(j.at("u"));
  log.d = from_array(j.at("d"));
  log.beta = number(j, "beta");
  log.alpha = number(j, "alpha");
  log.rho_norm = number(j, "rho_norm");
  log.r_norm = number(j, "r_norm");
  log.normal_inner_iterations = j.at("normal_inner_iterations").get<int>();
  log.tangential_inner_iterations = j.at("tangential_inner_iterations").get<int>();
  log.tangential_exact_fallback = j.at("tangential_exact_fallback").get<bool>();
  log.tau = number(j, "tau");
  log.tau_trial = number(j, "tau_trial");
  log.merit_q = number(j, "merit_q");
  log.normal_reduction = number(j, "normal_reduction");
  log.cauchy_reduction = number(j, "cauchy_reduction");
  log.true_model_reduction = number(j, "true_model_reduction");
  log.true_uhu = number(j, "true_uhu");
  log.normal_decrease_constant = number(j, "normal_decrease_constant");
  log.kkt_residual = number(j, "kkt_residual");
  log.kkt_inf_norm = number(j, "kkt_inf_norm");
  log.smallest_nonzero_singular_value =
      number(j, "smallest_nonzero_singular_value");
  return log;
}

void write_trajectory_jsonl(std::ostream& out, const RunRecord& record) {
  for (const auto& log : record.logs) {
    json j;
    j["problem"] = record.coords.problem;
    j["noise"] = record.coords.noise;
    j["eta"] = record.coords.eta;
    j["seed"] = record.coords.seed;
    j["variant"] = to_string(record.coords.variant);
    j.update(iteration_to_json(log));
    out << j.dump() << '\n';
  }
}

std::vector<IterationLog> read_trajectory_jsonl(std::istream& in) {
  std::vector<IterationLog> logs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    logs.push_back(iteration_from_json(json::parse(line)));
  }
  return logs;
}

void emit_rate_table(std::ostream& out, const RateTable& table) {
  out << "problem,measure,K,mean,ratio_to_previous\n";
  const char* measure = table.measure == RateMeasure::jtc_sq ? "jtc_sq" : "c_norm";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    out << table.problem << ',' << measure << ',' << table.rows[i].budget << ','
        << format_double(table.rows[i].mean) << ','
        << (i == 0 ? std::string() : format_double(table.ratios[i - 1])) << '\n';
  }
}

void emit_compare(std::ostream& out, std::span<const CompareRow> rows) {
  out << "problem,variant,runs,early_stops,feasible,mean_best_c_inf,"
         "mean_best_kkt_inf\n";
  for (const auto& r : rows) {
    out << r.problem << ',' << to_string(r.variant) << ',' << r.runs << ','
        << r.early_stops << ',' << r.feasible << ','
        << format_double(r.mean_best_c_inf) << ','
        << format_double(r.mean_best_kkt_inf) << '\n';
  }
}

}  // namespace itsqp
