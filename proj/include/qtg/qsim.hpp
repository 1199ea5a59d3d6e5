// Exact statevector simulation of the fixed encoding circuit: amplitude
// embedding, a nearest-neighbour CNOT chain, per-qubit Pauli-Z readout,
// and finite-shot bitstring sampling.
//
// Bit convention is big-endian throughout: qubit 0 is the most significant
// bit of a basis index, so |10> on two qubits is basis state 2.

#pragma once

#include <cstdint>
#include <map>

#include "qtg/common.hpp"

namespace qtg {

struct QuantumState {
  int n_qubits = 0;
  CVector amplitudes;  // length 2^n_qubits, unit L2 norm

  Eigen::Index dim() const { return amplitudes.size(); }
};

struct ShotCounts {
  int n_qubits = 0;
  std::uint64_t total_shots = 0;
  std::map<std::uint64_t, std::uint64_t> counts;  // basis index -> occurrences
};

// 2^n-dimensional uniform superposition
QuantumState uniform_state(int n_qubits);

// Normalises x, zero-pads to 2^n_qubits, loads as amplitudes.
// Throws ZeroVectorError for empty or all-zero x and DimensionOverflowError
// when x has more than 2^n_qubits components.
QuantumState amplitude_embed(const Vector& x, int n_qubits);

QuantumState apply_cnot(QuantumState state, int control, int target);

// CNOTs q -> q+1 for q = 0 .. n-2, ascending. Identity for n = 1.
QuantumState apply_cnot_chain(QuantumState state);

// <Z_q> for every qubit, in [-1, 1]
Vector expect_z_all(const QuantumState& state);

// Inverse-CDF sampling of complete measurements in the computational basis.
ShotCounts sample_bitstrings(const QuantumState& state, std::uint64_t shots,
                             std::uint64_t seed);

// Empirical <Z_q> estimates from measured bitstrings.
Vector expect_z_from_counts(const ShotCounts& counts);

}  // namespace qtg
