#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qaoamps/angles.hpp"
#include "qaoamps/problems.hpp"

namespace qaoamps {

enum class GateLabel { kCostFusedSwap, kFieldRotation, kMixer };

/// Gate on the physical chain; two-qubit gates act on (site, site+1) only.
struct GateOp {
  enum class Kind { kOneQubit, kTwoQubit };
  Kind kind = Kind::kOneQubit;
  int site = 0;
  Eigen::Matrix2cd u1;
  Eigen::Matrix4cd u2;
  GateLabel label = GateLabel::kMixer;
};

/// Logical -> physical qubit map.
using Permutation = std::vector<int>;

Permutation identity_perm(int n);
Permutation reversal_perm(int n);
Permutation compose(const Permutation& outer, const Permutation& inner);

/// exp(-i beta X).
Eigen::Matrix2cd rot_x(double beta);
/// exp(-i angle Z) with Z = diag(-1,+1) (spin convention z = 2s - 1).
Eigen::Matrix2cd rot_z(double angle);
/// exp(-i angle Z(x)Z) * SWAP, the fused cost-phase-plus-swap gate; the bare
/// SWAP when angle is a multiple of the gate period.
Eigen::Matrix4cd fused_zz_swap(double angle);

/// One QAOA cost layer as an n-round odd-even transposition network over the
/// chain. Field rotations are emitted first at each logical qubit's current
/// physical position; every unordered logical pair meets exactly once and
/// receives the fused exp(-i gamma J Z(x)Z) * SWAP gate at that meeting.
/// The returned permutation is full reversal composed with perm_in.
std::pair<std::vector<GateOp>, Permutation> compile_cost_layer(
    const IsingModel& model, double gamma, const Permutation& perm_in);

/// n single-qubit exp(-i beta X) gates; the permutation is unchanged.
std::vector<GateOp> compile_mixer_layer(int n, double beta);

struct CompiledCircuit {
  int n = 0;
  int p = 0;
  std::vector<std::vector<GateOp>> layers;  // gates of step j, in order
  std::vector<Permutation> perm_after;      // logical->physical after step j

  Permutation final_perm() const;
};

CompiledCircuit compile_qaoa(const IsingModel& model,
                             const AngleSchedule& schedule);

/// Human-readable gate listing for debugging; no stability guaranteed.
std::string dump_circuit(const CompiledCircuit& circuit);

}  // namespace qaoamps
