#include "qtg/noise.hpp"

#include <memory>

namespace qtg {

void validate(const NoiseModel& nm) {
  if (nm.depol_p < 0.0 || nm.depol_p > 1.0) throw ConfigError("depol_p must lie in [0, 1]");
  if (nm.readout_eps < 0.0 || nm.readout_eps > 0.5)
    throw ConfigError("readout_eps must lie in [0, 0.5]");
  if (nm.shots < 1) throw ConfigError("shots must be >= 1");
}

Vector noisy_expect_z(const QuantumState& state, const NoiseModel& nm) {
  validate(nm);
  const ShotCounts counts = sample_bitstrings(state, nm.shots, derive_seed(nm.seed, 0));
  const int n = state.n_qubits;
  Vector acc = Vector::Zero(n);
  Rng flips(derive_seed(nm.seed, 1));
  for (const auto& [b, c] : counts.counts) {
    for (std::uint64_t s = 0; s < c; ++s) {
      std::uint64_t bits = b;
      if (nm.readout_eps > 0.0)
        for (int q = 0; q < n; ++q)
          if (flips.next_double() < nm.readout_eps)
            bits ^= std::uint64_t{1} << (n - 1 - q);
      for (int q = 0; q < n; ++q)
        acc[q] += (bits & (std::uint64_t{1} << (n - 1 - q))) ? -1.0 : 1.0;
    }
  }
  return acc * ((1.0 - nm.depol_p) / double(nm.shots));
}

MetricsReport noisy_evaluate(const Dataset& data, Split split, const ParamStore& params,
                             const RunConfig& cfg, const NoiseModel& nm,
                             std::size_t n_eval) {
  validate(nm);
  if (n_eval < 1) throw ConfigError("n_eval must be >= 1");
  // every circuit execution in the window draws a fresh child seed, so the
  // whole run is reproducible from (nm.seed) alone
  auto counter = std::make_shared<std::uint64_t>(0);
  EvalHooks hooks;
  hooks.limit = n_eval;
  hooks.readout = [nm, counter](const QuantumState& st) {
    NoiseModel local = nm;
    local.seed = derive_seed(nm.seed, 10 + (*counter)++);
    return noisy_expect_z(st, local);
  };
  return evaluate(data, split, params, cfg, hooks);
}

}  // namespace qtg
