#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qaoamps/angles.hpp"
#include "qaoamps/engine.hpp"
#include "qaoamps/problems.hpp"
#include "qaoamps/trainer.hpp"

namespace qaoamps {

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Instance files: {kind, n, seed, adjacency | clauses, certificate?}.
// Round trips are lossless and serialization is byte-deterministic.
std::string problem_case_to_json(const ProblemCase& pc);
ProblemCase problem_case_from_json(const std::string& text,
                                   const std::string& id);
void write_problem_case(const std::filesystem::path& path,
                        const ProblemCase& pc);
ProblemCase read_problem_case(const std::filesystem::path& path);

// Angle files: {kind, p, gamma[], beta[], provenance{method, D, budget, seed}}.
std::string angle_schedule_to_json(const AngleSchedule& schedule,
                                   const std::string& kind);
std::pair<AngleSchedule, std::string> angle_schedule_from_json(
    const std::string& text);
void write_angle_schedule(const std::filesystem::path& path,
                          const AngleSchedule& schedule,
                          const std::string& kind);
std::pair<AngleSchedule, std::string> read_angle_schedule(
    const std::filesystem::path& path);

/// Shortest round-trip decimal rendering; used everywhere a double lands in
/// a file so reruns produce byte-identical output.
std::string format_double(double value);

/// Writes the per-cell sweep CSV: one row per cell with the columns
/// instance_id, kind, n, seed, D, p, metric, value, sample, sample_prob,
/// norm, cum_discarded, seconds. Leading '#' lines carry the run config.
void write_sweep_csv(const std::filesystem::path& path,
                     const SweepResult& result,
                     const std::vector<std::string>& config_lines);

/// Per-(D, p) aggregate table (mean metric, mean fidelity when present).
void write_aggregate_csv(const std::filesystem::path& path,
                         const SweepResult& result,
                         const std::vector<std::string>& config_lines);

/// Landscape dump: gamma, beta, value rows.
void write_landscape_csv(const std::filesystem::path& path,
                         const Landscape& landscape,
                         const std::vector<std::string>& config_lines);

/// Reads a sweep row CSV back (skipping '#' lines); used by the report
/// command to recompute aggregates.
SweepResult read_sweep_csv(const std::filesystem::path& path);

}  // namespace qaoamps
