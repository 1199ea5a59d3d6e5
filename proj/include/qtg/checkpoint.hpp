// Plain-text checkpoints: model dimensions, the run seed, and every trainable
// tensor at full double precision. Optimiser moments are not persisted.

#pragma once

#include <cstdint>
#include <string>

#include "qtg/nn.hpp"

namespace qtg {

struct Checkpoint {
  ParamStore params;
  Dims dims;
  std::uint64_t seed = 0;
};

void save_checkpoint(const ParamStore& params, const Dims& dims, std::uint64_t seed,
                     const std::string& path);

// Throws Error on unreadable, truncated, or corrupt files.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace qtg
