// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the measured values. Runtimes range from milliseconds to tens
// of minutes; the heavy fidelity anchor dominates.

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <random>
#include <set>

#include "qaoamps/engine.hpp"
#include "qaoamps/parallel.hpp"
#include "qaoamps/rng.hpp"
#include "qaoamps/trainer.hpp"
#include "support/dense_reference.hpp"

using namespace qaoamps;
using namespace qaoamps::testsupport;

namespace {

constexpr double kPi = std::numbers::pi;

// Instance seed banks; fixed so every criterion sees the same corpus.
constexpr std::uint64_t kTrainSeedBase = 1000;   // ten 12-qubit instances
constexpr std::uint64_t kMaxcutSeedBase = 2000;  // twenty 14-qubit MaxCut
constexpr std::uint64_t kEc3SeedBase = 3000;     // forty 14-qubit EC3

AngleSchedule shared_maxcut_schedule() {
  std::vector<ProblemCase> train_cases;
  for (int i = 0; i < 10; ++i)
    train_cases.push_back(make_case(
        "t" + std::to_string(i), gen_maxcut_er(12, 0.5, kTrainSeedBase + i)));
  SharedAngleOptions options;
  options.resolution = 48;
  options.refine_evals = 60;
  options.train.threads = 2;
  return shared_angle_set(train_cases, 64, 100, options);
}

AngleSchedule shared_ec3_schedule() {
  std::vector<ProblemCase> train_cases;
  for (int i = 0; i < 10; ++i)
    train_cases.push_back(
        make_case("t" + std::to_string(i),
                  gen_ec3(12, kTrainSeedBase + i).instance));
  SharedAngleOptions options;
  options.resolution = 48;
  options.refine_evals = 60;
  options.train.threads = 2;
  return shared_angle_set(train_cases, 64, 100, options);
}

std::vector<ProblemCase> maxcut14_cases(int count) {
  std::vector<ProblemCase> cases;
  for (int i = 0; i < count; ++i)
    cases.push_back(make_case("q14_" + std::to_string(i),
                              gen_maxcut_er(14, 0.5, kMaxcutSeedBase + i)));
  return cases;
}

double aggregate_of(const SweepResult& result, int d, int p) {
  for (const auto& agg : result.aggregates)
    if (agg.bond_cap == d && agg.p == p) return agg.mean_value;
  throw std::logic_error("missing aggregate cell");
}

}  // namespace

TEST_CASE("AC-01 deterministic sampling follows the greedy walk, not argmax") {
  Vector psi(4);
  psi << std::sqrt(0.32), std::sqrt(0.28), std::sqrt(0.05), std::sqrt(0.35);
  const auto state = mps_from_dense(psi, 2);
  const auto outcome = deterministic_sample(state);
  const Bitstring argmax = dense_argmax(psi);

  const bool pass = bits_to_string(outcome.bits) == "00" &&
                    std::abs(outcome.probability - 0.32) < 1e-12 &&
                    bits_to_string(argmax) == "11";
  std::printf("[AC-01] %s sample=%s prob=%.12f argmax=%s\n",
              pass ? "PASS" : "FAIL", bits_to_string(outcome.bits).c_str(),
              outcome.probability, bits_to_string(argmax).c_str());
  CHECK(bits_to_string(outcome.bits) == "00");
  CHECK(outcome.probability == doctest::Approx(0.32).epsilon(1e-12));
  CHECK(bits_to_string(argmax) == "11");
}

TEST_CASE("AC-02 dense-oracle equivalence at full bond dimension") {
  const int n = 10;
  double worst_fidelity = 1.0;
  double worst_cost_diff = 0.0;
  int sample_mismatches = 0;

  std::vector<ProblemCase> cases;
  for (int i = 0; i < 10; ++i) {
    cases.push_back(make_case("mc" + std::to_string(i),
                              gen_maxcut_er(n, 0.5, 4000 + i)));
    cases.push_back(
        make_case("ec" + std::to_string(i), gen_ec3(n, 4100 + i).instance));
  }

  std::mt19937_64 rng(4242);
  for (const auto& pc : cases) {
    const AngleBox box = AngleBox::for_kind(pc.kind);
    std::vector<double> gamma(3), beta(3);
    for (int j = 0; j < 3; ++j) {
      gamma[j] = box.gamma_max * uniform_unit(rng);
      beta[j] = box.beta_max * uniform_unit(rng);
    }
    const AngleSchedule schedule(gamma, beta);

    RunOptions options;
    options.bond_cap = 1 << (n / 2);
    options.sv_cutoff = 0.0;
    auto [state, diag] = run_qaoa(pc.model, schedule, options);
    const VectorXcd dense = dense_qaoa_state(pc.model, schedule);

    worst_fidelity = std::min(worst_fidelity,
                              dense_fidelity(state.to_statevector(), dense));
    worst_cost_diff = std::max(
        worst_cost_diff,
        std::abs(state.expect_ising(pc.model,
                                    MpsState::ExpectationMode::kNormalized) -
                 dense_expectation(dense, pc.model)));
    if (deterministic_sample(state).bits !=
        dense_deterministic_sample(dense).bits)
      ++sample_mismatches;
  }

  const bool pass = worst_fidelity >= 1.0 - 1e-10 &&
                    worst_cost_diff <= 1e-9 && sample_mismatches == 0;
  std::printf(
      "[AC-02] %s min_fidelity=%.12f max_cost_diff=%.2e sample_mismatches=%d "
      "(20 instances)\n",
      pass ? "PASS" : "FAIL", worst_fidelity, worst_cost_diff,
      sample_mismatches);
  CHECK(worst_fidelity >= 1.0 - 1e-10);
  CHECK(worst_cost_diff <= 1e-9);
  CHECK(sample_mismatches == 0);
}

TEST_CASE("AC-03 14-qubit MaxCut sweep with the shared angle set") {
  const AngleSchedule schedule = shared_maxcut_schedule();
  const auto cases = maxcut14_cases(20);
  SweepOptions options;
  options.threads = 2;
  const auto result =
      sweep(cases, schedule, {1, 10, 16}, {11, 30, 60, 100}, options);

  bool pass = true;
  for (int d : {10, 16}) {
    for (int p : {30, 60, 100}) {
      const double rbar = aggregate_of(result, d, p);
      std::printf("[AC-03]   D=%-3d p=%-3d rbar=%.4f (need >= 0.95)\n", d, p,
                  rbar);
      pass = pass && rbar >= 0.95;
      CHECK(rbar >= 0.95);
    }
  }
  for (int p : {11, 30, 60, 100}) {
    const double rbar = aggregate_of(result, 1, p);
    std::printf("[AC-03]   D=1   p=%-3d rbar=%.4f (need > 0.85)\n", p, rbar);
    pass = pass && rbar > 0.85;
    CHECK(rbar > 0.85);
  }
  std::printf("[AC-03] %s shared-schedule sweep over 20 instances\n",
              pass ? "PASS" : "FAIL");
}

TEST_CASE("AC-04 14-qubit fidelity anchor at p = 100") {
  const AngleSchedule schedule = shared_maxcut_schedule();
  const auto cases = maxcut14_cases(20);

  double fbar10 = 0.0, fbar40 = 0.0, fbar128 = 0.0;
  parallel_for(cases.size(), 2, [&](std::size_t i) {
    RunOptions exact;
    exact.bond_cap = 128;
    exact.sv_cutoff = 0.0;
    const MpsState reference = run_qaoa(cases[i].model, schedule, exact).first;

    double f[3];
    const int dims[3] = {10, 40, 128};
    for (int k = 0; k < 3; ++k) {
      RunOptions options;
      options.bond_cap = dims[k];
      auto [state, diag] = run_qaoa(cases[i].model, schedule, options);
      f[k] = fidelity(reference, state);
    }
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    fbar10 += f[0] / cases.size();
    fbar40 += f[1] / cases.size();
    fbar128 += f[2] / cases.size();
  });

  const bool pass = fbar10 >= 0.75 && fbar10 <= 0.98 && fbar40 >= 0.98 &&
                    fbar40 > fbar10 && fbar128 >= 1.0 - 1e-10;
  std::printf(
      "[AC-04] %s Fbar(10,100)=%.4f in [0.75,0.98]; Fbar(40,100)=%.5f >= "
      "0.98; Fbar(128,100)=%.12f = 1 within 1e-10\n",
      pass ? "PASS" : "FAIL", fbar10, fbar40, fbar128);
  CHECK(fbar10 >= 0.75);
  CHECK(fbar10 <= 0.98);
  CHECK(fbar40 >= 0.98);
  CHECK(fbar40 > fbar10);
  CHECK(fbar128 >= 1.0 - 1e-10);
}

TEST_CASE("AC-05 14-qubit EC3 success anchor") {
  const AngleSchedule schedule = shared_ec3_schedule();
  std::vector<ProblemCase> cases;
  for (int i = 0; i < 40; ++i)
    cases.push_back(make_case("e14_" + std::to_string(i),
                              gen_ec3(14, kEc3SeedBase + i).instance));

  SweepOptions options;
  options.threads = 2;
  const auto result = sweep(cases, schedule, {1, 5}, {30, 60}, options);
  const double x_1_60 = aggregate_of(result, 1, 60);
  const double x_1_30 = aggregate_of(result, 1, 30);
  const double x_5_30 = aggregate_of(result, 5, 30);

  const bool pass =
      x_1_60 >= 0.35 && x_1_60 <= 0.65 && x_5_30 >= x_1_30 + 0.1;
  std::printf(
      "[AC-05] %s xbar(D=1,p=60)=%.3f in [0.35,0.65]; xbar(D=5,p=30)=%.3f >= "
      "xbar(D=1,p=30)=%.3f + 0.1 (40 instances)\n",
      pass ? "PASS" : "FAIL", x_1_60, x_5_30, x_1_30);
  CHECK(x_1_60 >= 0.35);
  CHECK(x_1_60 <= 0.65);
  CHECK(x_5_30 >= x_1_30 + 0.1);
}

TEST_CASE("AC-06 truncation norm law at p = 1, D = 2") {
  const auto inst = gen_maxcut_er(12, 0.5, kTrainSeedBase);
  const auto model = maxcut_to_ising(inst);
  RunOptions options;
  options.bond_cap = 2;
  options.mode = NormMode::kNonNormalized;

  auto norm_at = [&](double gamma) {
    return run_qaoa(model, AngleSchedule({gamma}, {0.4}), options)
        .second.final_norm;
  };
  const double at_zero = norm_at(0.0);
  const double at_pi = norm_at(kPi);
  const double at_quarter = norm_at(kPi / 4);
  const double at_half = norm_at(kPi / 2);

  // With unit couplings the gate exp(-i gamma ZZ) has period pi and is a
  // product-preserving Clifford at gamma in {0, pi/2, pi}; the source
  // figure's axis corresponds to half-unit couplings, which places its
  // norm minimum ("gamma = pi/2") at gamma = pi/4 on this axis. The dip
  // assertion binds at the translated point; the raw pi/2 value is printed
  // for reference (see the decisions ledger).
  const bool pass = std::abs(at_zero - 1.0) < 1e-10 &&
                    std::abs(at_pi - 1.0) < 1e-10 && at_quarter < 0.9;
  std::printf(
      "[AC-06] %s norm(0)=%.12f norm(pi)=%.12f (=1 within 1e-10); "
      "norm(pi/4)=%.4f < 0.9 (translated dip); norm(pi/2)=%.12f "
      "(Clifford product point on this axis)\n",
      pass ? "PASS" : "FAIL", at_zero, at_pi, at_quarter, at_half);
  CHECK(std::abs(at_zero - 1.0) < 1e-10);
  CHECK(std::abs(at_pi - 1.0) < 1e-10);
  CHECK(at_quarter < 0.9);
}

TEST_CASE("AC-07 sampled-bitstring probability bound on 1000 random states") {
  std::mt19937_64 rng(777);
  double worst_margin = 1.0;
  double worst_consistency = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(uniform_below(rng, 9));  // 2..10
    const int max_bond =
        1 + static_cast<int>(uniform_below(rng, 1ull << (n / 2)));
    auto state = random_mps(rng, n, max_bond);
    const auto outcome = deterministic_sample(state);

    worst_margin = std::min(
        worst_margin, outcome.probability - (std::pow(2.0, -n) - 1e-12));

    const Vector dense = state.to_statevector();
    const double amp =
        std::norm(dense[index_of_bits(outcome.bits)]) / dense.squaredNorm();
    worst_consistency =
        std::max(worst_consistency, std::abs(amp - outcome.probability));
  }
  const bool pass = worst_margin >= 0.0 && worst_consistency < 1e-10;
  std::printf(
      "[AC-07] %s min margin above 2^-n bound = %.3e; max |dense - reported| "
      "= %.3e (1000 states)\n",
      pass ? "PASS" : "FAIL", worst_margin, worst_consistency);
  CHECK(worst_margin >= 0.0);
  CHECK(worst_consistency < 1e-10);
}

TEST_CASE("AC-08 landscape exactness and argmin stability") {
  const auto inst = gen_maxcut_er(12, 0.5, kTrainSeedBase);
  const auto model = maxcut_to_ising(inst);
  const int res = 50;
  std::vector<double> gamma_axis(res), beta_axis(res);
  for (int i = 0; i < res; ++i) {
    gamma_axis[i] = kPi * i / res;
    beta_axis[i] = kPi / 2 * i / res;
  }
  TrainOptions options;
  options.threads = 2;

  const auto exact = landscape_p1(model, 64, gamma_axis, beta_axis, options);
  double max_dev = 0.0;
  std::vector<double> dense_values(res * res);
  parallel_for(res * res, 2, [&](std::size_t idx) {
    const int gi = static_cast<int>(idx) / res;
    const int bi = static_cast<int>(idx) % res;
    const VectorXcd psi = dense_qaoa_state(
        model, AngleSchedule({gamma_axis[gi]}, {beta_axis[bi]}));
    dense_values[idx] = dense_expectation(psi, model);
  });
  for (int gi = 0; gi < res; ++gi)
    for (int bi = 0; bi < res; ++bi)
      max_dev = std::max(max_dev, std::abs(exact.values(gi, bi) -
                                           dense_values[gi * res + bi]));

  const auto capped = landscape_p1(model, 2, gamma_axis, beta_axis, options);

  // Cell distance on the periodic axes, minimized over the exact
  // (g, b) -> (pi - g, pi/2 - b) symmetry orbit of the reference argmin.
  auto torus_dist = [res](int a, int b) {
    const int d = std::abs(a - b);
    return std::min(d, res - d);
  };
  const int g64 = exact.argmin_gamma, b64 = exact.argmin_beta;
  const int g64m = (res - g64) % res, b64m = (res - b64) % res;
  const int dg = std::min(torus_dist(capped.argmin_gamma, g64),
                          torus_dist(capped.argmin_gamma, g64m));
  const int db = std::min(torus_dist(capped.argmin_beta, b64),
                          torus_dist(capped.argmin_beta, b64m));

  const bool pass = max_dev <= 1e-8 && dg <= 5 && db <= 2;
  std::printf(
      "[AC-08] %s max |C_64 - C_dense| = %.2e (<= 1e-8); D=2 argmin offset "
      "gamma=%d cells (<= 5), beta=%d cells (<= 2)\n",
      pass ? "PASS" : "FAIL", max_dev, dg, db);
  CHECK(max_dev <= 1e-8);
  CHECK(dg <= 5);
  CHECK(db <= 2);
}

TEST_CASE("AC-09 random-sampling success baseline at zero angles") {
  // A 12-qubit instance whose optimum is the bare Z2 pair.
  ProblemCase found;
  std::vector<Bitstring> minimizers;
  for (std::uint64_t seed = 0;; ++seed) {
    const auto inst = gen_maxcut_er(12, 0.5, seed);
    const auto ground = brute_force_ground(maxcut_to_ising(inst));
    if (ground.minimizers.size() == 2) {
      found = make_case("two_solutions", inst);
      minimizers = ground.minimizers;
      break;
    }
    REQUIRE(seed < 50);  // plenty; dense instances rarely need more than a few
  }

  TrainOptions options;
  options.threads = 2;
  const double eta = success_percentage_exact(
      found.model, AngleSchedule({0.0}, {0.0}), 1, minimizers, options);
  const double expected = 2.0 / 4096.0 * 100.0;  // 0.048828125 %

  const bool pass = std::abs(eta - expected) < 1e-4;
  std::printf(
      "[AC-09] %s eta(all-zero angles) = %.7f%%, expected %.7f%% within 1e-4 "
      "percentage points\n",
      pass ? "PASS" : "FAIL", eta, expected);
  CHECK(std::abs(eta - expected) < 1e-4);
}

TEST_CASE("AC-10 property batteries") {
  bool all = true;

  // Canonical isometries after arbitrary center moves.
  {
    std::mt19937_64 rng(11);
    bool ok = true;
    for (int trial = 0; trial < 5; ++trial) {
      auto state = random_mps(rng, 8, 6);
      state.canonicalize(static_cast<int>(uniform_below(rng, 8)));
      for (int k = 0; k < 8; ++k) {
        const auto& site = state.site(k);
        Matrix acc;
        if (k < state.ortho_center())
          acc = site.m[0].adjoint() * site.m[0] +
                site.m[1].adjoint() * site.m[1];
        else if (k > state.ortho_center())
          acc = site.m[0] * site.m[0].adjoint() +
                site.m[1] * site.m[1].adjoint();
        else
          continue;
        ok = ok && (acc - Matrix::Identity(acc.rows(), acc.cols()))
                           .cwiseAbs()
                           .maxCoeff() < 1e-10;
      }
    }
    std::printf("[AC-10]   canonical isometries: %s\n", ok ? "ok" : "FAIL");
    all = all && ok;
    CHECK(ok);
  }

  // Bond bound and truncation-weight accounting under random circuits.
  {
    std::mt19937_64 rng(12);
    bool ok = true;
    auto state = MpsState::plus_state(9, 3);
    for (int step = 0; step < 30; ++step) {
      const int j = static_cast<int>(uniform_below(rng, 8));
      const double before = state.squared_norm();
      const auto report = state.apply_2q(random_unitary(rng, 4), j);
      ok = ok && state.bond_dim(j) <= 3;
      ok = ok && std::abs(state.squared_norm() -
                          before * (1.0 - report.discarded_weight)) < 1e-12;
    }
    const auto dims = state.bond_dims();
    for (int k = 0; k + 1 < 9; ++k) {
      const double cap =
          std::min({std::pow(2.0, k + 1), std::pow(2.0, 8 - k), 3.0});
      ok = ok && dims[k] <= static_cast<int>(cap);
    }
    std::printf("[AC-10]   bond bounds and weight accounting: %s\n",
                ok ? "ok" : "FAIL");
    all = all && ok;
    CHECK(ok);
  }

  // Swap-network pair coverage and permutation law, up to 64 qubits.
  {
    bool ok = true;
    for (int n : {2, 3, 5, 8, 13, 21, 34, 64}) {
      Permutation holder = identity_perm(n);
      std::set<std::pair<int, int>> met;
      for (int round = 0; round < n; ++round) {
        for (int q = round % 2; q + 1 < n; q += 2) {
          int a = holder[q], b = holder[q + 1];
          if (a > b) std::swap(a, b);
          ok = ok && met.emplace(a, b).second;
          std::swap(holder[q], holder[q + 1]);
        }
      }
      ok = ok && met.size() == static_cast<std::size_t>(n * (n - 1) / 2);
      ok = ok && holder == reversal_perm(n);

      IsingModel model;
      model.n = n;
      model.h.assign(n, 0.0);
      AngleSchedule two({0.3, 0.7}, {0.2, 0.6});
      ok = ok && compile_qaoa(model, two).final_perm() == identity_perm(n);
    }
    std::printf("[AC-10]   pair coverage and permutation law: %s\n",
                ok ? "ok" : "FAIL");
    all = all && ok;
    CHECK(ok);
  }

  // MaxCut energy identity, EC3 energy identity, generator determinism.
  {
    bool ok = true;
    std::mt19937_64 rng(13);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto inst = gen_maxcut_er(10, 0.5, seed);
      const auto model = maxcut_to_ising(inst);
      Bitstring s(10);
      for (auto& b : s) b = static_cast<std::uint8_t>(rng() & 1);
      int cut = 0;
      for (auto [i, j] : inst.edges())
        if (s[i] != s[j]) ++cut;
      ok = ok && std::abs(classical_energy(model, s) + 2.0 * cut) < 1e-12;

      const auto gen = gen_ec3(10, seed);
      const auto ec_model = ec3_to_ising(gen.instance);
      Bitstring t(10);
      for (auto& b : t) b = static_cast<std::uint8_t>(rng() & 1);
      double expected = 0.0;
      for (const auto& c : gen.instance.clauses) {
        const int pop = t[c[0]] + t[c[1]] + t[c[2]];
        expected += (pop - 1) * (pop - 1);
      }
      ok = ok && std::abs(classical_energy(ec_model, t) - expected) < 1e-12;

      ok = ok && gen_maxcut_er(10, 0.5, seed).adjacency == inst.adjacency;
      ok = ok && gen_ec3(10, seed).instance.clauses == gen.instance.clauses;
    }
    std::printf(
        "[AC-10]   energy identities and generator determinism: %s\n",
        ok ? "ok" : "FAIL");
    all = all && ok;
    CHECK(ok);
  }

  std::printf("[AC-10] %s property batteries\n", all ? "PASS" : "FAIL");
}
