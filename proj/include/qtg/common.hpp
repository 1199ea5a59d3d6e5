// Shared aliases, error taxonomy, and the deterministic RNG used by every
// randomised component. All randomness in a run flows from one root seed
// through Rng::fork streams so results are reproducible from artifacts alone.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qtg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using NodeId = std::int64_t;

// Base error. The CLI maps ConfigError to exit code 1 and DataError to 2.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
  using Error::Error;
};
struct ShapeMismatchError : ConfigError {
  using ConfigError::ConfigError;
};

struct DataError : Error {
  using Error::Error;
};
struct SchemaError : DataError {
  using DataError::DataError;
};
struct OrderError : DataError {
  using DataError::DataError;
};
struct EmptyDatasetError : DataError {
  using DataError::DataError;
};

struct ZeroVectorError : Error {
  using Error::Error;
};
struct DimensionOverflowError : Error {
  using Error::Error;
};
struct TimestampRegressionError : Error {
  using Error::Error;
};
struct EmptyQuerySetError : Error {
  using Error::Error;
};
struct EmptyClassError : Error {
  using Error::Error;
};

// splitmix64 finalizer; also used to derive independent child seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed + 0x9e3779b97f4a7c15ULL * (2 * stream + 1));
}

// splitmix64 generator. Deliberately not std::mt19937 + std::*_distribution:
// those are implementation-defined, and the reproducibility contract is
// bit-identical streams for a fixed seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    return mix64(z);
  }

  // uniform in [0, 1), 53-bit resolution
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // unbiased integer in [0, bound)
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (~bound + 1) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // standard normal via Box-Muller, pair cached
  double next_gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = 0.0;
    do {
      u1 = next_double();
    } while (u1 <= 0.0);
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return r * std::cos(theta);
  }

  // independent child stream; identical tags give identical children
  Rng fork(std::uint64_t stream) const { return Rng(derive_seed(state_, stream)); }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace qtg
