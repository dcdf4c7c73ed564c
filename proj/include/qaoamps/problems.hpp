#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qaoamps {

// Spin convention used throughout: bit s in {0,1} maps to spin z = 2s - 1,
// i.e. bit 1 <-> spin +1. The Z observable is diag(-1,+1) in the (|0>,|1>)
// basis. Bitstrings read big-endian: qubit 1 is the most significant bit.

using Bitstring = std::vector<std::uint8_t>;

inline int spin_of(std::uint8_t bit) { return bit ? 1 : -1; }

std::string bits_to_string(const Bitstring& s);
Bitstring bits_from_string(const std::string& s);
Bitstring bits_from_index(std::uint64_t index, int n);
std::uint64_t index_of_bits(const Bitstring& s);

/// Ising cost model: constant + sum_i h_i z_i + sum_{i<j} J_ij z_i z_j.
struct IsingModel {
  int n = 0;
  std::vector<double> h;                      // size n, zero-filled
  std::map<std::pair<int, int>, double> J;    // keys (i,j) with i < j
  double constant = 0.0;

  void add_field(int i, double v);
  void add_coupling(int i, int j, double v);
  double coupling(int i, int j) const;
};

struct MaxCutInstance {
  int n = 0;
  std::vector<std::vector<std::uint8_t>> adjacency;  // symmetric, zero diagonal
  std::uint64_t seed = 0;
  double edge_prob = 0.5;

  int edge_count() const;
  std::vector<std::pair<int, int>> edges() const;
};

struct Ec3Instance {
  int n = 0;
  std::vector<std::array<int, 3>> clauses;  // strictly increasing triples
  std::uint64_t seed = 0;
};

struct Certificate {
  double energy = 0.0;
  Bitstring witness;
  bool optimal = false;  // true when produced by exhaustive search
};

/// Erdos-Renyi G(n, w): each unordered pair drawn independently with
/// probability w from the seeded stream.
MaxCutInstance gen_maxcut_er(int n, double w, std::uint64_t seed);

/// Per edge (i,j): constant -1, coupling +1, no fields. With this encoding
/// classical_energy(model, s) = -2 * cut(s).
IsingModel maxcut_to_ising(const MaxCutInstance& inst);

struct Ec3Generated {
  Ec3Instance instance;
  // Clause whose addition made the set unsatisfiable; absent when generation
  // stopped because every distinct triple was already used.
  std::optional<std::array<int, 3>> dropped_clause;
};

/// Grows a satisfiable clause set one random triple at a time, testing
/// satisfiability with the exact-cover solver after each addition, and stops
/// at the first clause that breaks it.
Ec3Generated gen_ec3(int n, std::uint64_t seed);

/// Per clause (a,b,c): constant +1, fields +1/2 on a,b,c, couplings +1/2 on
/// the three pairs. energy(s) = sum_clauses (popcount - 1)^2, so energy 0
/// certifies an exact cover.
IsingModel ec3_to_ising(const Ec3Instance& inst);

double classical_energy(const IsingModel& model, const Bitstring& s);

/// True iff every clause has exactly one set bit.
bool ec3_satisfied(const Ec3Instance& inst, const Bitstring& s);

struct GroundResult {
  double energy = 0.0;
  std::vector<Bitstring> minimizers;
};

/// Exhaustive minimum over all 2^n assignments; n <= 24.
GroundResult brute_force_ground(const IsingModel& model);

/// First satisfying assignment found by the dancing-links exact-cover search,
/// or nullopt when the clause set is unsatisfiable.
std::optional<Bitstring> exact_cover_solve(int n,
                                           const std::vector<std::array<int, 3>>& clauses);

/// Best assignment found by seeded multi-restart steepest-descent bit flips.
/// A best-found certificate, not an optimality proof; for reference energies
/// beyond the brute-force limit.
Certificate local_search_certificate(const IsingModel& model, int restarts,
                                     std::uint64_t seed);

}  // namespace qaoamps
