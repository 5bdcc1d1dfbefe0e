#pragma once

#include "itsqp/harness.hpp"
#include "itsqp/problem.hpp"

#include <json.hpp>

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace itsqp {

/// Header of the per-run summary CSV. Bit-exact; downstream tooling keys on it.
inline constexpr const char* kSummaryHeader =
    "problem,noise,eta,seed,variant,K_used,best_k,best_c_inf,best_kkt_inf,"
    "final_jtc,wall_ms";

/// %.17g rendering; round-trips every double.
std::string format_double(double value);

/// Header line plus one row per record.
void emit_summary(std::ostream& out, std::span<const RunRecord> records);
std::string summary_row(const RunRecord& record);

nlohmann::json problem_metadata(const ProblemInstance& problem);
nlohmann::json corpus_metadata();

/// One JSON object per iteration log, field names matching IterationLog,
/// prefixed by the run coordinates.
nlohmann::json iteration_to_json(const IterationLog& log);
IterationLog iteration_from_json(const nlohmann::json& j);
void write_trajectory_jsonl(std::ostream& out, const RunRecord& record);
/// Reads back every iteration log of a JSONL trajectory.
std::vector<IterationLog> read_trajectory_jsonl(std::istream& in);

void emit_rate_table(std::ostream& out, const RateTable& table);
void emit_compare(std::ostream& out, std::span<const CompareRow> rows);

}  // namespace itsqp
