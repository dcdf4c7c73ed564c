#include "qaoamps/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "qaoamps/parallel.hpp"
#include "qaoamps/rng.hpp"

namespace qaoamps {

namespace {

constexpr double kPi = std::numbers::pi;

RunOptions run_options_for(int bond_cap, const TrainOptions& options) {
  RunOptions run;
  run.bond_cap = bond_cap;
  run.sv_cutoff = options.sv_cutoff;
  run.mode = options.mode;
  return run;
}

MpsState::ExpectationMode expectation_mode(const TrainOptions& options) {
  return options.mode == NormMode::kNonNormalized
             ? MpsState::ExpectationMode::kRaw
             : MpsState::ExpectationMode::kNormalized;
}

int full_bond_dim(int n) { return 1 << (n / 2); }

AngleSchedule schedule_from_vector(const Eigen::VectorXd& x, int p) {
  std::vector<double> gamma(p), beta(p);
  for (int j = 0; j < p; ++j) {
    gamma[j] = x[j];
    beta[j] = x[p + j];
  }
  return AngleSchedule(std::move(gamma), std::move(beta));
}

// Wraps a value into [0, period).
double wrap_angle(double value, double period) {
  double w = std::fmod(value, period);
  if (w < 0.0) w += period;
  return w;
}

}  // namespace

AngleBox AngleBox::maxcut() { return {kPi, kPi / 2.0}; }
AngleBox AngleBox::ec3() { return {2.0 * kPi, kPi / 2.0}; }

AngleBox AngleBox::for_kind(const std::string& kind) {
  if (kind == "maxcut") return maxcut();
  if (kind == "ec3") return ec3();
  throw std::invalid_argument("unknown problem kind: " + kind);
}

double cost_p1(const IsingModel& model, int bond_cap, double gamma,
               double beta, const TrainOptions& options) {
  AngleSchedule schedule({gamma}, {beta});
  auto [state, diag] =
      run_qaoa(model, schedule, run_options_for(bond_cap, options));
  return state.expect_ising(model, expectation_mode(options));
}

double cost_schedule(const IsingModel& model, const AngleSchedule& schedule,
                     int bond_cap, const TrainOptions& options) {
  auto [state, diag] =
      run_qaoa(model, schedule, run_options_for(bond_cap, options));
  return state.expect_ising(model, expectation_mode(options));
}

Landscape landscape_p1(const IsingModel& model, int bond_cap,
                       const std::vector<double>& gamma_axis,
                       const std::vector<double>& beta_axis,
                       const TrainOptions& options) {
  if (gamma_axis.empty() || beta_axis.empty())
    throw std::invalid_argument("landscape grids must be non-empty");

  Landscape ls;
  ls.gamma_axis = gamma_axis;
  ls.beta_axis = beta_axis;
  ls.bond_cap = bond_cap;
  ls.mode = options.mode;
  ls.values.resize(gamma_axis.size(), beta_axis.size());

  const std::size_t total = gamma_axis.size() * beta_axis.size();
  parallel_for(total, options.threads, [&](std::size_t idx) {
    const std::size_t gi = idx / beta_axis.size();
    const std::size_t bi = idx % beta_axis.size();
    ls.values(gi, bi) =
        cost_p1(model, bond_cap, gamma_axis[gi], beta_axis[bi], options);
  });

  ls.min_value = ls.values(0, 0);
  for (Eigen::Index gi = 0; gi < ls.values.rows(); ++gi) {
    for (Eigen::Index bi = 0; bi < ls.values.cols(); ++bi) {
      if (ls.values(gi, bi) < ls.min_value) {
        ls.min_value = ls.values(gi, bi);
        ls.argmin_gamma = static_cast<int>(gi);
        ls.argmin_beta = static_cast<int>(bi);
      }
    }
  }
  return ls;
}

AngleSchedule grid_search_p1(const IsingModel& model, int bond_cap,
                             int resolution, const AngleBox& box,
                             const TrainOptions& options) {
  if (resolution < 8)
    throw std::invalid_argument("grid search needs resolution >= 8 per axis");
  std::vector<double> gamma_axis(resolution), beta_axis(resolution);
  for (int i = 0; i < resolution; ++i) {
    gamma_axis[i] = box.gamma_max * i / resolution;
    beta_axis[i] = box.beta_max * i / resolution;
  }
  Landscape ls = landscape_p1(model, bond_cap, gamma_axis, beta_axis, options);
  AngleSchedule out({gamma_axis[ls.argmin_gamma]}, {beta_axis[ls.argmin_beta]});
  out.provenance.method = "grid";
  out.provenance.bond_dim = bond_cap;
  out.provenance.budget = {resolution, resolution * resolution};
  return out;
}

AngleSchedule extrapolate_schedule(const AngleSchedule& p1_opt, int p) {
  if (p1_opt.p != 1)
    throw std::invalid_argument("extrapolation anchors at a p = 1 schedule");
  if (p < 1) throw std::invalid_argument("extrapolation requires p >= 1");
  // Linear extrapolation of a single anchor point is replication: every
  // layer reuses (gamma*, beta*). Ramps that start the gamma curve at ~0
  // leave short prefixes of the master schedule with no cost evolution at
  // all, which defeats the prefix-slicing contract that sweeps rely on.
  AngleSchedule out(std::vector<double>(p, p1_opt.gamma[0]),
                    std::vector<double>(p, p1_opt.beta[0]));
  out.provenance = p1_opt.provenance;
  out.provenance.method = "extrapolated";
  return out;
}

NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& start, const Eigen::VectorXd& step, int max_evals) {
  const int dim = static_cast<int>(start.size());
  if (step.size() != start.size())
    throw std::invalid_argument("step size vector must match dimension");

  NelderMeadResult result;
  result.evaluations = 0;
  double incumbent = std::numeric_limits<double>::infinity();
  Eigen::VectorXd incumbent_x = start;

  auto eval = [&](const Eigen::VectorXd& x) {
    const double v = objective(x);
    ++result.evaluations;
    if (v < incumbent) {
      incumbent = v;
      incumbent_x = x;
    }
    result.incumbent_trace.push_back(incumbent);
    return v;
  };

  struct Vertex {
    Eigen::VectorXd x;
    double value;
  };
  std::vector<Vertex> simplex;
  simplex.push_back({start, eval(start)});
  for (int d = 0; d < dim && result.evaluations < max_evals; ++d) {
    Eigen::VectorXd x = start;
    x[d] += step[d];
    simplex.push_back({x, eval(x)});
  }

  const double alpha = 1.0, gamma_c = 2.0, rho = 0.5, sigma = 0.5;
  while (result.evaluations < max_evals &&
         static_cast<int>(simplex.size()) == dim + 1) {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Vertex& a, const Vertex& b) {
                       return a.value < b.value;
                     });
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < dim; ++i) centroid += simplex[i].x;
    centroid /= dim;

    Vertex& worst = simplex.back();
    Eigen::VectorXd xr = centroid + alpha * (centroid - worst.x);
    const double fr = eval(xr);
    if (fr < simplex[0].value) {
      if (result.evaluations >= max_evals) break;
      Eigen::VectorXd xe = centroid + gamma_c * (xr - centroid);
      const double fe = eval(xe);
      worst = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
    } else if (fr < simplex[dim - 1].value) {
      worst = {xr, fr};
    } else {
      if (result.evaluations >= max_evals) break;
      Eigen::VectorXd xc = centroid + rho * (worst.x - centroid);
      const double fc = eval(xc);
      if (fc < worst.value) {
        worst = {xc, fc};
      } else {
        for (int i = 1; i <= dim && result.evaluations < max_evals; ++i) {
          simplex[i].x =
              simplex[0].x + sigma * (simplex[i].x - simplex[0].x);
          simplex[i].value = eval(simplex[i].x);
        }
      }
    }
  }

  result.x = incumbent_x;
  result.value = incumbent;
  return result;
}

AngleSchedule shared_angle_set(const std::vector<ProblemCase>& cases,
                               int bond_cap, int p_max,
                               const SharedAngleOptions& options) {
  if (cases.empty())
    throw std::invalid_argument("shared angle set needs at least one instance");
  for (const auto& pc : cases) {
    if (pc.kind != cases.front().kind)
      throw std::invalid_argument(
          "shared angle set requires instances of one problem kind");
  }
  const AngleBox box = AngleBox::for_kind(cases.front().kind);
  const bool flip_symmetric = cases.front().kind == "maxcut";

  std::vector<AngleSchedule> schedules(cases.size());
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const IsingModel& model = cases[i].model;
    AngleSchedule p1 =
        grid_search_p1(model, bond_cap, options.resolution, box, options.train);

    if (options.refine_evals > 0) {
      auto objective = [&](const Eigen::VectorXd& x) {
        return cost_p1(model, bond_cap, x[0], x[1], options.train);
      };
      Eigen::VectorXd start(2);
      start << p1.gamma[0], p1.beta[0];
      Eigen::VectorXd step(2);
      step << box.gamma_max / options.resolution,
          box.beta_max / options.resolution;
      NelderMeadResult nm =
          nelder_mead(objective, start, step, options.refine_evals);
      p1.gamma[0] = nm.x[0];
      p1.beta[0] = nm.x[1];
    }

    // Canonicalize before averaging. The cost is gamma-periodic with the
    // box width; beta is pi/2-periodic for flip-symmetric costs (a flip
    // commutes through them) and pi-periodic otherwise. Flip-symmetric
    // costs additionally obey (g, b) -> (pi - g, pi/2 - b), so anchors are
    // mapped into one minima family or the component-wise mean would land
    // between the two.
    p1.gamma[0] = wrap_angle(p1.gamma[0], box.gamma_max);
    p1.beta[0] = wrap_angle(p1.beta[0], flip_symmetric ? kPi / 2.0 : kPi);
    if (flip_symmetric && p1.gamma[0] > kPi / 2.0) {
      p1.gamma[0] = kPi - p1.gamma[0];
      p1.beta[0] = kPi / 2.0 - p1.beta[0];
    }
    schedules[i] = extrapolate_schedule(p1, p_max);
  }

  AngleSchedule out(std::vector<double>(p_max, 0.0),
                    std::vector<double>(p_max, 0.0));
  for (const auto& s : schedules) {
    for (int j = 0; j < p_max; ++j) {
      out.gamma[j] += s.gamma[j] / cases.size();
      out.beta[j] += s.beta[j] / cases.size();
    }
  }
  out.provenance.method = "shared";
  out.provenance.bond_dim = bond_cap;
  out.provenance.budget = {options.resolution, options.refine_evals};
  return out;
}

AngleSchedule global_optimize_traced(const IsingModel& model, int p,
                                     int bond_cap, const Budget& budget,
                                     std::uint64_t seed, const AngleBox& box,
                                     const TrainOptions& options,
                                     std::vector<double>* incumbent_trace) {
  if (p < 1) throw std::invalid_argument("global optimization requires p >= 1");
  if (budget.init_points < 2 * p || budget.total_evals <= budget.init_points)
    throw std::invalid_argument(
        "budget must satisfy total_evals > init_points >= 2p");

  const int dim = 2 * p;
  auto objective = [&](const Eigen::VectorXd& x) {
    return cost_schedule(model, schedule_from_vector(x, p), bond_cap, options);
  };

  // Latin hypercube design over the angle box.
  std::mt19937_64 rng(seed);
  const int m = budget.init_points;
  std::vector<Eigen::VectorXd> design(m, Eigen::VectorXd(dim));
  for (int d = 0; d < dim; ++d) {
    std::vector<int> strata(m);
    std::iota(strata.begin(), strata.end(), 0);
    for (int i = m - 1; i > 0; --i)
      std::swap(strata[i],
                strata[static_cast<int>(uniform_below(
                    rng, static_cast<std::uint64_t>(i) + 1))]);
    const double width = d < p ? box.gamma_max : box.beta_max;
    for (int i = 0; i < m; ++i)
      design[i][d] = width * (strata[i] + uniform_unit(rng)) / m;
  }

  std::vector<double> design_values(m);
  parallel_for(m, options.threads, [&](std::size_t i) {
    design_values[i] = objective(design[i]);
  });

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return design_values[a] < design_values[b];
  });

  // Bounded simplex descents from the best seeds, merged in restart order.
  const int remaining = budget.total_evals - budget.init_points;
  const int restarts = std::max(1, std::min({5, m, remaining / (dim + 2)}));
  const int per_restart = remaining / restarts;
  std::vector<NelderMeadResult> results(restarts);
  Eigen::VectorXd step(dim);
  for (int d = 0; d < dim; ++d)
    step[d] = 0.05 * (d < p ? box.gamma_max : box.beta_max);

  parallel_for(restarts, options.threads, [&](std::size_t r) {
    const int extra =
        static_cast<int>(r) == restarts - 1 ? remaining % restarts : 0;
    results[r] = nelder_mead(objective, design[order[r]], step,
                             per_restart + extra);
  });

  // Incumbent bookkeeping: design evaluations first, then restarts in
  // restart-index order, so the winner and trace are thread-schedule free.
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x = design[order[0]];
  std::vector<double> trace;
  trace.reserve(budget.total_evals);
  for (int i = 0; i < m; ++i) {
    if (design_values[i] < best) {
      best = design_values[i];
      best_x = design[i];
    }
    trace.push_back(best);
  }
  for (const auto& res : results) {
    for (double v : res.incumbent_trace) trace.push_back(std::min(best, v));
    if (res.value < best) {
      best = res.value;
      best_x = res.x;
    }
  }

  if (incumbent_trace) *incumbent_trace = std::move(trace);

  AngleSchedule out = schedule_from_vector(best_x, p);
  out.provenance.method = "multistart";
  out.provenance.bond_dim = bond_cap;
  out.provenance.budget = {budget.init_points, budget.total_evals};
  out.provenance.seed = seed;
  return out;
}

AngleSchedule global_optimize(const IsingModel& model, int p, int bond_cap,
                              const Budget& budget, std::uint64_t seed,
                              const AngleBox& box,
                              const TrainOptions& options) {
  return global_optimize_traced(model, p, bond_cap, budget, seed, box, options,
                                nullptr);
}

namespace {

double overlap_percentage(const MpsState& state,
                          const std::vector<Bitstring>& solutions) {
  const double sq = state.squared_norm();
  if (sq <= 0.0) throw DegenerateStateError("zero-norm state");
  double sum = 0.0;
  for (const auto& s : solutions) sum += std::norm(state.amplitude(s));
  return 100.0 * sum / sq;
}

}  // namespace

double success_percentage_exact(const IsingModel& model,
                                const AngleSchedule& schedule, int j,
                                const std::vector<Bitstring>& solutions,
                                const TrainOptions& options) {
  if (solutions.empty())
    throw std::invalid_argument("success percentage needs a solution set");
  if (j < 0 || j > schedule.p)
    throw std::invalid_argument("step index exceeds the schedule depth");
  RunOptions run = run_options_for(full_bond_dim(model.n), options);
  auto [state, diag] = run_qaoa(model, schedule.prefix(j), run);
  return overlap_percentage(state, solutions);
}

double success_percentage_approx(const IsingModel& model,
                                 const AngleSchedule& schedule, int j,
                                 int bond_cap,
                                 const std::vector<Bitstring>& solutions,
                                 const TrainOptions& options) {
  if (solutions.empty())
    throw std::invalid_argument("success percentage needs a solution set");
  if (j < 0 || j > schedule.p)
    throw std::invalid_argument("step index exceeds the schedule depth");
  RunOptions run = run_options_for(bond_cap, options);
  auto [state, diag] = run_qaoa(model, schedule.prefix(j), run);
  return overlap_percentage(state, solutions);  // normalized by <psi|psi>
}

double normalized_success(double eta_candidate, double eta_reference_exact) {
  if (!(eta_reference_exact > 0.0))
    throw std::invalid_argument("reference success must be positive");
  return 100.0 * eta_candidate / eta_reference_exact;
}

}  // namespace qaoamps
