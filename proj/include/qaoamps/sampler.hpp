#pragma once

#include <vector>

#include "qaoamps/mps.hpp"
#include "qaoamps/problems.hpp"

namespace qaoamps {

struct SampleOutcome {
  Bitstring bits;
  double probability = 1.0;             // product of the conditionals
  std::vector<double> conditionals;     // P(s_k | s_1..s_{k-1}) per qubit
};

/// Greedy sequential sampling: sweeps qubit 1..n, projects each onto its
/// locally most probable outcome (ties go to 1), and renormalizes. Returns
/// the Algorithm-1 bitstring, which need not be the global argmax; its
/// probability satisfies |<s|psi>|^2 >= 2^-n. A non-normalized input is
/// normalized first.
SampleOutcome deterministic_sample(MpsState state);

}  // namespace qaoamps
