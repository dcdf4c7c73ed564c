#include "qaoamps/compiler.hpp"

#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qaoamps {

namespace {
using Complex = std::complex<double>;
const Complex kI(0.0, 1.0);
}  // namespace

Permutation identity_perm(int n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Permutation reversal_perm(int n) {
  Permutation p(n);
  for (int i = 0; i < n; ++i) p[i] = n - 1 - i;
  return p;
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
  if (outer.size() != inner.size())
    throw std::invalid_argument("permutation sizes differ");
  Permutation out(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) out[i] = outer[inner[i]];
  return out;
}

Eigen::Matrix2cd rot_x(double beta) {
  Eigen::Matrix2cd u;
  const double c = std::cos(beta);
  const Complex s = -kI * std::sin(beta);
  u << c, s, s, c;
  return u;
}

Eigen::Matrix2cd rot_z(double angle) {
  // Z = diag(-1,+1), so |0> picks up e^{+i angle} and |1> e^{-i angle}.
  Eigen::Matrix2cd u = Eigen::Matrix2cd::Zero();
  u(0, 0) = std::exp(kI * angle);
  u(1, 1) = std::exp(-kI * angle);
  return u;
}

Eigen::Matrix4cd fused_zz_swap(double angle) {
  // Z(x)Z = diag(+1,-1,-1,+1) in either spin-sign convention; the phase
  // diagonal commutes with SWAP.
  const Complex same = std::exp(-kI * angle);
  const Complex diff = std::exp(kI * angle);
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
  u(0, 0) = same;
  u(1, 2) = diff;
  u(2, 1) = diff;
  u(3, 3) = same;
  return u;
}

std::pair<std::vector<GateOp>, Permutation> compile_cost_layer(
    const IsingModel& model, double gamma, const Permutation& perm_in) {
  const int n = model.n;
  if (n < 2)
    throw std::invalid_argument("cost layer requires at least two qubits");
  if (static_cast<int>(perm_in.size()) != n)
    throw std::invalid_argument("permutation size does not match model");

  std::vector<GateOp> gates;
  gates.reserve(n + n * (n - 1) / 2);

  // Field rotations first, at each logical qubit's current physical site.
  for (int i = 0; i < n; ++i) {
    if (model.h[i] == 0.0) continue;
    GateOp op;
    op.kind = GateOp::Kind::kOneQubit;
    op.site = perm_in[i];
    op.u1 = rot_z(gamma * model.h[i]);
    op.label = GateLabel::kFieldRotation;
    gates.push_back(op);
  }

  // physical -> logical during the swap rounds
  std::vector<int> holder(n);
  for (int i = 0; i < n; ++i) holder[perm_in[i]] = i;

  for (int round = 0; round < n; ++round) {
    for (int q = round % 2; q + 1 < n; q += 2) {
      const int a = holder[q];
      const int b = holder[q + 1];
      GateOp op;
      op.kind = GateOp::Kind::kTwoQubit;
      op.site = q;
      op.u2 = fused_zz_swap(gamma * model.coupling(a, b));
      op.label = GateLabel::kCostFusedSwap;
      gates.push_back(op);
      std::swap(holder[q], holder[q + 1]);
    }
  }

  Permutation perm_out(n);
  for (int q = 0; q < n; ++q) perm_out[holder[q]] = q;
  return {std::move(gates), std::move(perm_out)};
}

std::vector<GateOp> compile_mixer_layer(int n, double beta) {
  std::vector<GateOp> gates;
  gates.reserve(n);
  const Eigen::Matrix2cd u = rot_x(beta);
  for (int q = 0; q < n; ++q) {
    GateOp op;
    op.kind = GateOp::Kind::kOneQubit;
    op.site = q;
    op.u1 = u;
    op.label = GateLabel::kMixer;
    gates.push_back(op);
  }
  return gates;
}

Permutation CompiledCircuit::final_perm() const {
  if (perm_after.empty()) return identity_perm(n);
  return perm_after.back();
}

CompiledCircuit compile_qaoa(const IsingModel& model,
                             const AngleSchedule& schedule) {
  CompiledCircuit circuit;
  circuit.n = model.n;
  circuit.p = schedule.p;
  Permutation perm = identity_perm(model.n);
  for (int j = 0; j < schedule.p; ++j) {
    auto [gates, perm_out] =
        compile_cost_layer(model, schedule.gamma[j], perm);
    auto mixer = compile_mixer_layer(model.n, schedule.beta[j]);
    gates.insert(gates.end(), mixer.begin(), mixer.end());
    circuit.layers.push_back(std::move(gates));
    circuit.perm_after.push_back(perm_out);
    perm = std::move(perm_out);
  }
  return circuit;
}

std::string dump_circuit(const CompiledCircuit& circuit) {
  std::ostringstream out;
  out << "circuit n=" << circuit.n << " p=" << circuit.p << "\n";
  for (int j = 0; j < circuit.p; ++j) {
    out << "layer " << j + 1 << ":\n";
    for (const auto& op : circuit.layers[j]) {
      const char* label = op.label == GateLabel::kCostFusedSwap
                              ? "cost-fused-swap"
                          : op.label == GateLabel::kFieldRotation
                              ? "field-rotation"
                              : "mixer";
      if (op.kind == GateOp::Kind::kTwoQubit) {
        out << "  2q (" << op.site << "," << op.site + 1 << ") " << label
            << "\n";
      } else {
        out << "  1q " << op.site << " " << label << "\n";
      }
    }
    out << "  perm:";
    for (int v : circuit.perm_after[j]) out << ' ' << v;
    out << "\n";
  }
  return out.str();
}

}  // namespace qaoamps
