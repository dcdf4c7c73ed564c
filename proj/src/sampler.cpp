#include "qaoamps/sampler.hpp"

namespace qaoamps {

namespace {
// Probability gaps below this resolve as ties (onto |1>). Symmetric states
// carry exact ties that float noise would otherwise break arbitrarily.
constexpr double kTieTolerance = 1e-12;
}  // namespace

SampleOutcome deterministic_sample(MpsState state) {
  const int n = state.n();
  state.canonicalize(0);
  if (state.norm() <= 0.0)
    throw DegenerateStateError("cannot sample a zero-norm state");
  state.scale(1.0 / state.norm_scalar());

  SampleOutcome out;
  out.bits.resize(n);
  out.conditionals.resize(n);
  for (int k = 0; k < n; ++k) {
    state.canonicalize(k);
    const SiteTensor& site = state.site(k);
    const double w0 = site.m[0].squaredNorm();
    const double w1 = site.m[1].squaredNorm();
    const double total = w0 + w1;
    const int outcome = ((w0 - w1) / total > kTieTolerance) ? 0 : 1;
    const double p = state.project_qubit(k, outcome);
    out.bits[k] = static_cast<std::uint8_t>(outcome);
    out.conditionals[k] = p;
    out.probability *= p;
  }
  return out;
}

}  // namespace qaoamps
