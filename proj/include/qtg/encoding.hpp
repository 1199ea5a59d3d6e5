// Adaptive amplitude encoding. Each node keeps the feature vector that was
// last pushed through the circuit; new observations re-encode only when the
// sigmoid activity factor clears the refresh threshold, otherwise the cached
// readout is reused. Stateless amplitude and angle baselines live here too.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>

#include "qtg/common.hpp"
#include "qtg/qsim.hpp"

namespace qtg {

enum class UpdateStrategy { kAdaptive, kAlways, kNever };
enum class Encoding { kAae, kAmplitude, kAngle };

UpdateStrategy parse_update_strategy(const std::string& name);
Encoding parse_encoding(const std::string& name);
const char* to_string(UpdateStrategy s);
const char* to_string(Encoding e);

struct EncoderConfig {
  double beta = 1.0;  // activity sensitivity
  double tau = 0.6;   // refresh when alpha > tau
  int n_qubits = 8;
  UpdateStrategy strategy = UpdateStrategy::kAdaptive;
  Encoding encoding = Encoding::kAae;
};

void validate(const EncoderConfig& cfg);

// sigmoid(beta * ||dx||), clamped below 1 so the documented range [0.5, 1)
// survives floating-point saturation at large arguments
double activity_factor(const Vector& dx, double beta);

// Replaces the exact expectation readout, e.g. with a sampled noisy one.
using ReadoutFn = std::function<Vector(const QuantumState&)>;

// One pass of the circuit: normalise, embed, entangle, read out.
// A zero-norm input falls back to the uniform superposition (all-zero z).
Vector encode_features(const Vector& x, int n_qubits, const ReadoutFn& readout = {});

// z[q] = cos(x[q]); missing components read as cos(0) = 1
Vector angle_embed_z(const Vector& x, int n_qubits);

struct NodeCache {
  NodeId node = 0;
  Vector x_prev;    // last feature vector that was actually encoded
  Vector z_cached;  // circuit readout from that refresh
  std::uint64_t refresh_count = 0;
  std::uint64_t event_count = 0;
};

NodeCache encode_initial(NodeId node, const Vector& x, const EncoderConfig& cfg,
                         const ReadoutFn& readout = {});

struct UpdateResult {
  Vector z;
  bool refreshed = false;
};

// The adaptive rule: alpha-blend toward the new observation, re-encode when
// the gate fires, and freeze x_prev otherwise so small drifts accumulate.
UpdateResult adaptive_update(NodeCache& cache, const Vector& x_curr,
                             const EncoderConfig& cfg, const ReadoutFn& readout = {});

// Same decision rule, no state committed. Used to score candidate endpoints
// that did not actually interact.
Vector peek_update(const NodeCache& cache, const Vector& x_curr,
                   const EncoderConfig& cfg, const ReadoutFn& readout = {});

// Per-node embedding frontend. observe() advances node state for true
// interactions; query() is side-effect free.
class Encoder {
 public:
  explicit Encoder(EncoderConfig cfg);

  Vector observe(NodeId node, const Vector& x);
  Vector query(NodeId node, const Vector& x) const;

  void set_readout(ReadoutFn readout) { readout_ = std::move(readout); }
  void reset();

  std::uint64_t event_count() const { return events_; }
  std::uint64_t refresh_count() const { return refreshes_; }
  double refresh_rate() const { return events_ ? double(refreshes_) / double(events_) : 0.0; }
  const EncoderConfig& config() const { return cfg_; }
  bool has_cache(NodeId node) const { return caches_.count(node) > 0; }
  const NodeCache& cache(NodeId node) const { return caches_.at(node); }

 private:
  EncoderConfig cfg_;
  ReadoutFn readout_;
  std::unordered_map<NodeId, NodeCache> caches_;
  std::uint64_t events_ = 0;
  std::uint64_t refreshes_ = 0;
};

}  // namespace qtg
