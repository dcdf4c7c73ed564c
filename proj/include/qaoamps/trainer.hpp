#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qaoamps/angles.hpp"
#include "qaoamps/engine.hpp"
#include "qaoamps/problems.hpp"

namespace qaoamps {

/// Periodicity-reduced search box [0, gamma_max) x [0, beta_max). The ZZ
/// gates of unit-coupling MaxCut models have period pi in gamma; EC3's
/// half-integer couplings double it.
struct AngleBox {
  double gamma_max = 0.0;
  double beta_max = 0.0;

  static AngleBox maxcut();
  static AngleBox ec3();
  static AngleBox for_kind(const std::string& kind);
};

struct TrainOptions {
  double sv_cutoff = 1e-12;
  NormMode mode = NormMode::kNonNormalized;  // Eq.-8-style raw costs
  unsigned threads = 0;
};

struct Landscape {
  std::vector<double> gamma_axis;
  std::vector<double> beta_axis;
  Eigen::MatrixXd values;  // values(i, j) = C at (gamma_axis[i], beta_axis[j])
  int bond_cap = 0;
  NormMode mode = NormMode::kNonNormalized;
  int argmin_gamma = 0;
  int argmin_beta = 0;
  double min_value = 0.0;
};

/// C_D(gamma, beta) on the grid for a depth-1 circuit. Non-normalized mode
/// evaluates the raw bilinear cost on the truncated state; normalized mode
/// divides by the state norm.
Landscape landscape_p1(const IsingModel& model, int bond_cap,
                       const std::vector<double>& gamma_axis,
                       const std::vector<double>& beta_axis,
                       const TrainOptions& options);

/// Single p = 1 cost evaluation (the landscape cell function).
double cost_p1(const IsingModel& model, int bond_cap, double gamma,
               double beta, const TrainOptions& options);

/// Cost of a full schedule at bond cap D under the training mode.
double cost_schedule(const IsingModel& model, const AngleSchedule& schedule,
                     int bond_cap, const TrainOptions& options);

/// Argmin cell of the resolution x resolution landscape over the box; ties
/// break toward the smallest gamma, then beta.
AngleSchedule grid_search_p1(const IsingModel& model, int bond_cap,
                             int resolution, const AngleBox& box,
                             const TrainOptions& options);

/// Linear-ramp extension anchored at the p = 1 optimum (g*, b*):
/// gamma_j = g* j/p, beta_j = b* (1 - (j-1)/p). An annealing-like schedule;
/// the ramp shape is recorded in provenance so alternatives stay pluggable.
AngleSchedule extrapolate_schedule(const AngleSchedule& p1_opt, int p);

struct SharedAngleOptions {
  int resolution = 48;
  int refine_evals = 60;  // simplex budget for polishing the p=1 anchor
  TrainOptions train;
};

/// Per instance: grid search, simplex polish of the (gamma, beta) anchor on
/// the same p = 1 cost, linear extrapolation to p_max; then the component-
/// wise mean across instances. All instances must share one problem kind.
AngleSchedule shared_angle_set(const std::vector<ProblemCase>& cases,
                               int bond_cap, int p_max,
                               const SharedAngleOptions& options);

struct Budget {
  int init_points = 0;
  int total_evals = 0;
};

/// Latin-hypercube initial design over the 2p-dimensional box followed by
/// bounded Nelder-Mead descents from the best seeds; deterministic given the
/// seed, evaluation count capped by the budget.
AngleSchedule global_optimize(const IsingModel& model, int p, int bond_cap,
                              const Budget& budget, std::uint64_t seed,
                              const AngleBox& box, const TrainOptions& options);

/// Optimizer incumbent trace (best cost after each evaluation) for the last
/// global_optimize call is not retained; this variant returns it for
/// monotonicity checks.
AngleSchedule global_optimize_traced(const IsingModel& model, int p,
                                     int bond_cap, const Budget& budget,
                                     std::uint64_t seed, const AngleBox& box,
                                     const TrainOptions& options,
                                     std::vector<double>* incumbent_trace);

/// Sum of squared overlaps with the solution set, in percent, for the exact
/// (full bond dimension) QAOA state built from the first j angle pairs.
double success_percentage_exact(const IsingModel& model,
                                const AngleSchedule& schedule, int j,
                                const std::vector<Bitstring>& solutions,
                                const TrainOptions& options);

/// Same overlap sum for the D-capped state, renormalized before the overlap.
double success_percentage_approx(const IsingModel& model,
                                 const AngleSchedule& schedule, int j,
                                 int bond_cap,
                                 const std::vector<Bitstring>& solutions,
                                 const TrainOptions& options);

/// eta_candidate / eta_reference x 100; may exceed 100.
double normalized_success(double eta_candidate, double eta_reference_exact);

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  std::vector<double> incumbent_trace;  // best-so-far after each evaluation
};

/// Deterministic Nelder-Mead with an evaluation cap.
NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& start, const Eigen::VectorXd& step, int max_evals);

}  // namespace qaoamps
