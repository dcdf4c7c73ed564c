#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qaoamps/angles.hpp"
#include "qaoamps/compiler.hpp"
#include "qaoamps/mps.hpp"
#include "qaoamps/problems.hpp"
#include "qaoamps/sampler.hpp"

namespace qaoamps {

/// A problem instance bundled with its Ising encoding and (optionally) a
/// reference certificate for the optimum.
struct ProblemCase {
  std::string id;
  std::string kind;  // "maxcut" | "ec3"
  int n = 0;
  std::uint64_t seed = 0;
  IsingModel model;
  std::optional<MaxCutInstance> maxcut;
  std::optional<Ec3Instance> ec3;
  std::optional<Certificate> certificate;
};

ProblemCase make_case(std::string id, const MaxCutInstance& inst);
ProblemCase make_case(std::string id, const Ec3Instance& inst);

struct RunOptions {
  int bond_cap = 1;
  double sv_cutoff = 1e-12;
  NormMode mode = NormMode::kNonNormalized;
  int report_capacity = 0;  // ring size for per-gate truncation reports
};

struct RunDiagnostics {
  int max_bond_reached = 1;
  double cum_discarded = 0.0;
  double final_norm = 1.0;
  double seconds = 0.0;
  std::vector<TruncationReport> reports;  // bounded ring of the last gates
};

/// Compiles and applies the QAOA circuit to |+>^n under the bond cap, then
/// restores logical qubit order by relabeling (the swap network's net
/// permutation is a chain reversal per cost layer).
std::pair<MpsState, RunDiagnostics> run_qaoa(const IsingModel& model,
                                             const AngleSchedule& schedule,
                                             const RunOptions& options);

/// r(s) = E(s) / C_min for minimization problems with C_min < 0.
double approximation_ratio(const IsingModel& model, const Bitstring& s,
                           double c_min);

struct SweepCell {
  std::string instance_id;
  std::string kind;
  int n = 0;
  std::uint64_t seed = 0;
  int bond_cap = 0;
  int p = 0;
  std::string metric;  // "r" | "x"
  double value = 0.0;
  bool computable = true;
  Bitstring sample;
  double sample_prob = 0.0;
  double norm = 0.0;
  double cum_discarded = 0.0;
  double seconds = 0.0;
  std::optional<double> fidelity;
};

struct SweepAggregate {
  int bond_cap = 0;
  int p = 0;
  double mean_value = 0.0;
  int count = 0;  // computable cells entering the mean
  std::optional<double> mean_fidelity;
};

struct SweepResult {
  std::vector<SweepCell> cells;          // ordered (instance, D, p)
  std::vector<SweepAggregate> aggregates;  // ordered (D, p)
};

struct SweepOptions {
  double sv_cutoff = 1e-12;
  NormMode mode = NormMode::kNonNormalized;
  bool with_fidelity = false;  // fill F against a full-D reference (n <= 20)
  unsigned threads = 0;        // 0 = hardware concurrency
};

/// Runs every (instance, D, p) cell with the p-prefix of the master
/// schedule, deterministically samples one bitstring, and scores it:
/// approximation ratio for MaxCut (against the certificate, or brute force
/// for n <= 24); exact-cover success for EC3. MaxCut cells beyond the
/// brute-force limit without a certificate are marked incomputable.
SweepResult sweep(const std::vector<ProblemCase>& cases,
                  const AngleSchedule& master_schedule,
                  const std::vector<int>& bond_caps,
                  const std::vector<int>& depths, const SweepOptions& options);

struct FidelityCell {
  int bond_cap = 0;
  int p = 0;
  double fidelity = 0.0;
};

/// F(D, p) of the bond-capped state against a full-D reference run; n <= 20.
std::vector<FidelityCell> fidelity_grid(const IsingModel& model,
                                        const AngleSchedule& master_schedule,
                                        const std::vector<int>& bond_caps,
                                        const std::vector<int>& depths,
                                        const SweepOptions& options);

}  // namespace qaoamps
