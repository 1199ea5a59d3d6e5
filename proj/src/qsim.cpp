#include "qtg/qsim.hpp"

#include <algorithm>
#include <vector>

namespace qtg {

namespace {

void check_qubit_count(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 24)
    throw ConfigError("n_qubits must be in [1, 24], got " + std::to_string(n_qubits));
}

// big-endian: qubit 0 owns the most significant bit of the basis index
std::uint64_t qubit_mask(int n_qubits, int q) {
  return std::uint64_t{1} << (n_qubits - 1 - q);
}

}  // namespace

QuantumState uniform_state(int n_qubits) {
  check_qubit_count(n_qubits);
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  QuantumState s{n_qubits, CVector::Constant(dim, 1.0 / std::sqrt(double(dim)))};
  return s;
}

QuantumState amplitude_embed(const Vector& x, int n_qubits) {
  check_qubit_count(n_qubits);
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  if (x.size() > dim)
    throw DimensionOverflowError("feature dimension " + std::to_string(x.size()) +
                                 " exceeds state dimension " + std::to_string(dim));
  const double norm = x.norm();
  if (x.size() == 0 || norm == 0.0)
    throw ZeroVectorError("cannot amplitude-embed a zero vector");

  QuantumState s{n_qubits, CVector::Zero(dim)};
  s.amplitudes.head(x.size()) = (x / norm).cast<std::complex<double>>();
  return s;
}

QuantumState apply_cnot(QuantumState state, int control, int target) {
  const int n = state.n_qubits;
  if (control < 0 || control >= n || target < 0 || target >= n || control == target)
    throw ConfigError("invalid CNOT wires " + std::to_string(control) + "," +
                      std::to_string(target) + " on " + std::to_string(n) + " qubits");
  const std::uint64_t cmask = qubit_mask(n, control);
  const std::uint64_t tmask = qubit_mask(n, target);
  const std::uint64_t dim = std::uint64_t{1} << n;
  // swap the target bit within the control=1 subspace; visit each pair once
  for (std::uint64_t b = 0; b < dim; ++b)
    if ((b & cmask) && !(b & tmask))
      std::swap(state.amplitudes[Eigen::Index(b)], state.amplitudes[Eigen::Index(b | tmask)]);
  return state;
}

QuantumState apply_cnot_chain(QuantumState state) {
  for (int q = 0; q + 1 < state.n_qubits; ++q) state = apply_cnot(std::move(state), q, q + 1);
  return state;
}

Vector expect_z_all(const QuantumState& state) {
  const int n = state.n_qubits;
  const std::uint64_t dim = std::uint64_t{1} << n;
  const Vector probs = state.amplitudes.cwiseAbs2();
  Vector z = Vector::Zero(n);
  for (std::uint64_t b = 0; b < dim; ++b) {
    const double p = probs[Eigen::Index(b)];
    for (int q = 0; q < n; ++q) z[q] += (b & qubit_mask(n, q)) ? -p : p;
  }
  return z;
}

ShotCounts sample_bitstrings(const QuantumState& state, std::uint64_t shots,
                             std::uint64_t seed) {
  if (shots == 0) throw ConfigError("shots must be positive");
  const Eigen::Index dim = state.dim();
  std::vector<double> cdf(std::size_t(dim), 0.0);
  double acc = 0.0;
  for (Eigen::Index b = 0; b < dim; ++b) {
    acc += std::norm(state.amplitudes[b]);
    cdf[std::size_t(b)] = acc;
  }
  cdf.back() = 1.0;  // guard against rounding in the running sum

  Rng rng(seed);
  ShotCounts out{state.n_qubits, shots, {}};
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.next_double();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto idx = std::uint64_t(std::min<std::ptrdiff_t>(it - cdf.begin(), dim - 1));
    ++out.counts[idx];
  }
  return out;
}

Vector expect_z_from_counts(const ShotCounts& counts) {
  if (counts.total_shots == 0) throw ConfigError("empty shot record");
  const int n = counts.n_qubits;
  Vector z = Vector::Zero(n);
  for (const auto& [b, c] : counts.counts) {
    const double w = double(c);
    for (int q = 0; q < n; ++q) z[q] += (b & qubit_mask(n, q)) ? -w : w;
  }
  return z / double(counts.total_shots);
}

}  // namespace qtg
