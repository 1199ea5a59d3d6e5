// Hardware-flavoured readout: finite-shot sampling, independent per-qubit
// readout flips, and global depolarising attenuation of the Z expectations.
// E[z_hat] = (1 - depol_p) * (1 - 2*readout_eps) * z, spread ~ 1/sqrt(shots).

#pragma once

#include <cstdint>

#include "qtg/pipeline.hpp"
#include "qtg/qsim.hpp"

namespace qtg {

struct NoiseModel {
  double depol_p = 0.02;
  double readout_eps = 0.01;
  std::uint64_t shots = 2048;
  std::uint64_t seed = 0;
};

void validate(const NoiseModel& nm);

// one sampled, bit-flipped, attenuated estimate of expect_z_all
Vector noisy_expect_z(const QuantumState& state, const NoiseModel& nm);

// evaluate() with the exact readout replaced by fresh noisy estimates for
// the first n_eval scored events of the split
MetricsReport noisy_evaluate(const Dataset& data, Split split, const ParamStore& params,
                             const RunConfig& cfg, const NoiseModel& nm,
                             std::size_t n_eval = 100);

}  // namespace qtg
