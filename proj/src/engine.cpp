#include "qaoamps/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>

#include "qaoamps/parallel.hpp"

namespace qaoamps {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int full_bond_dim(int n) { return 1 << (n / 2); }

}  // namespace

ProblemCase make_case(std::string id, const MaxCutInstance& inst) {
  ProblemCase c;
  c.id = std::move(id);
  c.kind = "maxcut";
  c.n = inst.n;
  c.seed = inst.seed;
  c.model = maxcut_to_ising(inst);
  c.maxcut = inst;
  return c;
}

ProblemCase make_case(std::string id, const Ec3Instance& inst) {
  ProblemCase c;
  c.id = std::move(id);
  c.kind = "ec3";
  c.n = inst.n;
  c.seed = inst.seed;
  c.model = ec3_to_ising(inst);
  c.ec3 = inst;
  return c;
}

std::pair<MpsState, RunDiagnostics> run_qaoa(const IsingModel& model,
                                             const AngleSchedule& schedule,
                                             const RunOptions& options) {
  const auto start = Clock::now();
  CompiledCircuit circuit = compile_qaoa(model, schedule);
  MpsState state = MpsState::plus_state(model.n, options.bond_cap,
                                        options.sv_cutoff, options.mode);
  RunDiagnostics diag;
  long gate_index = 0;
  for (const auto& layer : circuit.layers) {
    for (const auto& op : layer) {
      if (op.kind == GateOp::Kind::kOneQubit) {
        state.apply_1q(op.u1, op.site);
      } else {
        TruncationReport report = state.apply_2q(op.u2, op.site);
        report.gate_index = gate_index;
        diag.max_bond_reached =
            std::max(diag.max_bond_reached, report.kept_rank);
        if (options.report_capacity > 0) {
          if (static_cast<int>(diag.reports.size()) >=
              options.report_capacity)
            diag.reports.erase(diag.reports.begin());
          diag.reports.push_back(report);
        }
      }
      ++gate_index;
    }
  }

  // The network reverses the chain once per cost layer; undo by relabeling.
  const Permutation perm = circuit.final_perm();
  if (perm == reversal_perm(model.n)) {
    state.reverse();
  } else if (perm != identity_perm(model.n)) {
    throw std::logic_error("unexpected final permutation from swap network");
  }

  diag.cum_discarded = state.cum_discarded();
  diag.final_norm = state.norm();
  diag.seconds = elapsed_seconds(start);
  return {std::move(state), std::move(diag)};
}

double approximation_ratio(const IsingModel& model, const Bitstring& s,
                           double c_min) {
  if (!(c_min < 0.0))
    throw std::invalid_argument(
        "approximation ratio requires a negative optimal cost");
  return classical_energy(model, s) / c_min;
}

namespace {

struct CellJob {
  std::size_t case_index;
  int p;
  std::vector<int> bond_caps;  // cells sharing one fidelity reference
  std::size_t first_cell;      // index into the result vector
};

}  // namespace

SweepResult sweep(const std::vector<ProblemCase>& cases,
                  const AngleSchedule& master_schedule,
                  const std::vector<int>& bond_caps,
                  const std::vector<int>& depths,
                  const SweepOptions& options) {
  for (int p : depths) {
    if (p < 0 || p > master_schedule.p)
      throw std::invalid_argument(
          "sweep depth exceeds the master schedule length");
  }

  // Reference optima for the approximation ratio, one per MaxCut case.
  std::vector<std::optional<double>> c_min(cases.size());
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const ProblemCase& pc = cases[i];
    if (pc.kind != "maxcut") continue;
    if (pc.certificate) {
      c_min[i] = pc.certificate->energy;
    } else if (pc.n <= 24) {
      c_min[i] = brute_force_ground(pc.model).energy;
    }
  }

  SweepResult result;
  std::vector<CellJob> jobs;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    for (int p : depths) {
      CellJob job;
      job.case_index = i;
      job.p = p;
      job.bond_caps = bond_caps;
      job.first_cell = result.cells.size();
      for (int d : bond_caps) {
        SweepCell cell;
        const ProblemCase& pc = cases[i];
        cell.instance_id = pc.id;
        cell.kind = pc.kind;
        cell.n = pc.n;
        cell.seed = pc.seed;
        cell.bond_cap = d;
        cell.p = p;
        cell.metric = pc.kind == "maxcut" ? "r" : "x";
        result.cells.push_back(std::move(cell));
      }
      jobs.push_back(std::move(job));
    }
  }

  parallel_for(jobs.size(), options.threads, [&](std::size_t ji) {
    const CellJob& job = jobs[ji];
    const ProblemCase& pc = cases[job.case_index];
    const AngleSchedule prefix = master_schedule.prefix(job.p);

    std::optional<MpsState> reference;
    if (options.with_fidelity && pc.n <= 20) {
      RunOptions ref_options;
      ref_options.bond_cap = full_bond_dim(pc.n);
      ref_options.sv_cutoff = options.sv_cutoff;
      ref_options.mode = options.mode;
      reference = run_qaoa(pc.model, prefix, ref_options).first;
    }

    for (std::size_t di = 0; di < job.bond_caps.size(); ++di) {
      SweepCell& cell = result.cells[job.first_cell + di];
      const auto start = Clock::now();
      RunOptions run_options;
      run_options.bond_cap = job.bond_caps[di];
      run_options.sv_cutoff = options.sv_cutoff;
      run_options.mode = options.mode;
      auto [state, diag] = run_qaoa(pc.model, prefix, run_options);

      SampleOutcome sample = deterministic_sample(state);
      cell.sample = sample.bits;
      cell.sample_prob = sample.probability;
      cell.norm = diag.final_norm;
      cell.cum_discarded = diag.cum_discarded;

      if (pc.kind == "maxcut") {
        if (c_min[job.case_index]) {
          cell.value = approximation_ratio(pc.model, sample.bits,
                                           *c_min[job.case_index]);
        } else {
          cell.computable = false;
          cell.value = std::numeric_limits<double>::quiet_NaN();
        }
      } else {
        cell.value = ec3_satisfied(*pc.ec3, sample.bits) ? 1.0 : 0.0;
      }
      if (reference) cell.fidelity = fidelity(*reference, state);
      cell.seconds = elapsed_seconds(start);
    }
  });

  // Aggregates in (D, p) order.
  for (int d : bond_caps) {
    for (int p : depths) {
      SweepAggregate agg;
      agg.bond_cap = d;
      agg.p = p;
      double sum = 0.0;
      double fid_sum = 0.0;
      int fid_count = 0;
      for (const auto& cell : result.cells) {
        if (cell.bond_cap != d || cell.p != p || !cell.computable) continue;
        sum += cell.value;
        ++agg.count;
        if (cell.fidelity) {
          fid_sum += *cell.fidelity;
          ++fid_count;
        }
      }
      if (agg.count > 0) agg.mean_value = sum / agg.count;
      if (fid_count > 0) agg.mean_fidelity = fid_sum / fid_count;
      result.aggregates.push_back(agg);
    }
  }
  return result;
}

std::vector<FidelityCell> fidelity_grid(const IsingModel& model,
                                        const AngleSchedule& master_schedule,
                                        const std::vector<int>& bond_caps,
                                        const std::vector<int>& depths,
                                        const SweepOptions& options) {
  if (model.n > 20)
    throw SizeLimitError("fidelity_grid requires n <= 20 for the exact state");

  std::vector<FidelityCell> cells(bond_caps.size() * depths.size());
  parallel_for(depths.size(), options.threads, [&](std::size_t pi) {
    const AngleSchedule prefix = master_schedule.prefix(depths[pi]);
    RunOptions ref_options;
    ref_options.bond_cap = full_bond_dim(model.n);
    ref_options.sv_cutoff = options.sv_cutoff;
    ref_options.mode = options.mode;
    MpsState reference = run_qaoa(model, prefix, ref_options).first;

    for (std::size_t di = 0; di < bond_caps.size(); ++di) {
      RunOptions run_options;
      run_options.bond_cap = bond_caps[di];
      run_options.sv_cutoff = options.sv_cutoff;
      run_options.mode = options.mode;
      MpsState state = run_qaoa(model, prefix, run_options).first;
      FidelityCell& cell = cells[di * depths.size() + pi];
      cell.bond_cap = bond_caps[di];
      cell.p = depths[pi];
      cell.fidelity = fidelity(reference, state);
    }
  });
  return cells;
}

}  // namespace qaoamps
