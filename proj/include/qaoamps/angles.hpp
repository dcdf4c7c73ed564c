#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qaoamps {

struct AngleProvenance {
  std::string method;  // grid | extrapolated | multistart | shared | file
  int bond_dim = 0;
  std::array<int, 2> budget{0, 0};  // (init points, total evaluations)
  std::uint64_t seed = 0;
};

/// QAOA angle schedule: gamma/beta vectors of length p, in radians.
struct AngleSchedule {
  int p = 0;
  std::vector<double> gamma;
  std::vector<double> beta;
  AngleProvenance provenance;

  AngleSchedule() = default;
  AngleSchedule(std::vector<double> g, std::vector<double> b)
      : p(static_cast<int>(g.size())), gamma(std::move(g)), beta(std::move(b)) {
    if (gamma.size() != beta.size())
      throw std::invalid_argument("gamma and beta must have equal length");
  }

  /// First p_sub angle pairs, keeping provenance.
  AngleSchedule prefix(int p_sub) const {
    if (p_sub < 0 || p_sub > p)
      throw std::invalid_argument("prefix length out of range");
    AngleSchedule out;
    out.p = p_sub;
    out.gamma.assign(gamma.begin(), gamma.begin() + p_sub);
    out.beta.assign(beta.begin(), beta.begin() + p_sub);
    out.provenance = provenance;
    return out;
  }
};

}  // namespace qaoamps
