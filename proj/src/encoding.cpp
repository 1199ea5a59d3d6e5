#include "qtg/encoding.hpp"

#include <cmath>
#include <limits>

namespace qtg {

UpdateStrategy parse_update_strategy(const std::string& name) {
  if (name == "adaptive") return UpdateStrategy::kAdaptive;
  if (name == "always") return UpdateStrategy::kAlways;
  if (name == "never") return UpdateStrategy::kNever;
  throw ConfigError("unknown update strategy '" + name + "'");
}

Encoding parse_encoding(const std::string& name) {
  if (name == "aae") return Encoding::kAae;
  if (name == "amplitude") return Encoding::kAmplitude;
  if (name == "angle") return Encoding::kAngle;
  throw ConfigError("unknown encoding '" + name + "'");
}

const char* to_string(UpdateStrategy s) {
  switch (s) {
    case UpdateStrategy::kAdaptive: return "adaptive";
    case UpdateStrategy::kAlways: return "always";
    case UpdateStrategy::kNever: return "never";
  }
  return "?";
}

const char* to_string(Encoding e) {
  switch (e) {
    case Encoding::kAae: return "aae";
    case Encoding::kAmplitude: return "amplitude";
    case Encoding::kAngle: return "angle";
  }
  return "?";
}

void validate(const EncoderConfig& cfg) {
  if (!(cfg.beta > 0.0) || !std::isfinite(cfg.beta))
    throw ConfigError("beta must be positive and finite");
  if (!(cfg.tau >= 0.0 && cfg.tau <= 1.0))
    throw ConfigError("tau must lie in [0, 1]");
  if (cfg.n_qubits < 1 || cfg.n_qubits > 24)
    throw ConfigError("n_qubits must be in [1, 24]");
}

double activity_factor(const Vector& dx, double beta) {
  const double a = 1.0 / (1.0 + std::exp(-beta * dx.norm()));
  // sigmoid of a nonnegative argument is < 1 mathematically but rounds to
  // 1.0 in doubles past ~37; clamp to keep the open upper bound real
  return std::min(a, std::nextafter(1.0, 0.0));
}

Vector encode_features(const Vector& x, int n_qubits, const ReadoutFn& readout) {
  const QuantumState st = (x.size() > 0 && x.norm() > 0.0)
                              ? apply_cnot_chain(amplitude_embed(x, n_qubits))
                              : apply_cnot_chain(uniform_state(n_qubits));
  return readout ? readout(st) : expect_z_all(st);
}

Vector angle_embed_z(const Vector& x, int n_qubits) {
  Vector z = Vector::Ones(n_qubits);
  const Eigen::Index m = std::min<Eigen::Index>(x.size(), n_qubits);
  for (Eigen::Index q = 0; q < m; ++q) z[q] = std::cos(x[q]);
  return z;
}

NodeCache encode_initial(NodeId node, const Vector& x, const EncoderConfig& cfg,
                         const ReadoutFn& readout) {
  NodeCache cache;
  cache.node = node;
  cache.x_prev = x;
  cache.z_cached = encode_features(x, cfg.n_qubits, readout);
  cache.refresh_count = 1;
  cache.event_count = 1;
  return cache;
}

namespace {

struct Decision {
  bool refresh = false;
  Vector x_encoded;  // unit norm unless the blend is identically zero
};

// Shared by the committing and read-only paths so both produce bit-identical
// embeddings for the same cache and observation.
Decision decide(const NodeCache& cache, const Vector& x_curr, const EncoderConfig& cfg) {
  if (x_curr.size() != cache.x_prev.size())
    throw ShapeMismatchError("feature dimension changed for node " +
                             std::to_string(cache.node));
  Decision d;
  double alpha = 0.0;
  switch (cfg.strategy) {
    case UpdateStrategy::kNever:
      return d;
    case UpdateStrategy::kAlways:
      alpha = activity_factor(x_curr - cache.x_prev, cfg.beta);
      d.refresh = true;
      break;
    case UpdateStrategy::kAdaptive:
      alpha = activity_factor(x_curr - cache.x_prev, cfg.beta);
      d.refresh = alpha > cfg.tau;
      break;
  }
  if (!d.refresh) return d;
  Vector blended = cache.x_prev + alpha * (x_curr - cache.x_prev);
  const double norm = blended.norm();
  d.x_encoded = norm > 0.0 ? Vector(blended / norm) : std::move(blended);
  return d;
}

}  // namespace

UpdateResult adaptive_update(NodeCache& cache, const Vector& x_curr,
                             const EncoderConfig& cfg, const ReadoutFn& readout) {
  Decision d = decide(cache, x_curr, cfg);
  ++cache.event_count;
  if (!d.refresh) return {cache.z_cached, false};
  cache.z_cached = encode_features(d.x_encoded, cfg.n_qubits, readout);
  cache.x_prev = x_curr;
  ++cache.refresh_count;
  return {cache.z_cached, true};
}

Vector peek_update(const NodeCache& cache, const Vector& x_curr,
                   const EncoderConfig& cfg, const ReadoutFn& readout) {
  Decision d = decide(cache, x_curr, cfg);
  if (!d.refresh) return cache.z_cached;
  return encode_features(d.x_encoded, cfg.n_qubits, readout);
}

Encoder::Encoder(EncoderConfig cfg) : cfg_(cfg) { validate(cfg_); }

Vector Encoder::observe(NodeId node, const Vector& x) {
  ++events_;
  switch (cfg_.encoding) {
    case Encoding::kAngle:
      ++refreshes_;
      return angle_embed_z(x, cfg_.n_qubits);
    case Encoding::kAmplitude:
      ++refreshes_;
      return encode_features(x, cfg_.n_qubits, readout_);
    case Encoding::kAae:
      break;
  }
  auto it = caches_.find(node);
  if (it == caches_.end()) {
    it = caches_.emplace(node, encode_initial(node, x, cfg_, readout_)).first;
    ++refreshes_;
    return it->second.z_cached;
  }
  UpdateResult r = adaptive_update(it->second, x, cfg_, readout_);
  if (r.refreshed) ++refreshes_;
  return r.z;
}

Vector Encoder::query(NodeId node, const Vector& x) const {
  switch (cfg_.encoding) {
    case Encoding::kAngle:
      return angle_embed_z(x, cfg_.n_qubits);
    case Encoding::kAmplitude:
      return encode_features(x, cfg_.n_qubits, readout_);
    case Encoding::kAae:
      break;
  }
  const auto it = caches_.find(node);
  if (it == caches_.end()) return encode_features(x, cfg_.n_qubits, readout_);
  return peek_update(it->second, x, cfg_, readout_);
}

void Encoder::reset() {
  caches_.clear();
  events_ = 0;
  refreshes_ = 0;
}

}  // namespace qtg
