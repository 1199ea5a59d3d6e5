#include "qtg/memory.hpp"

namespace qtg {

MemoryStore::MemoryStore(Eigen::Index dim) : dim_(dim) {
  if (dim < 1) throw ConfigError("memory dimension must be positive");
}

MemorySlot MemoryStore::get(NodeId node) const {
  const auto it = slots_.find(node);
  if (it == slots_.end()) return {Vector::Zero(dim_), 0.0};
  return it->second;
}

void MemoryStore::update(NodeId node, const Vector& h, double t) {
  if (h.size() != dim_)
    throw ShapeMismatchError("memory write of width " + std::to_string(h.size()) +
                             " into store of width " + std::to_string(dim_));
  auto it = slots_.find(node);
  if (it == slots_.end()) {
    slots_.emplace(node, MemorySlot{h, t});
    return;
  }
  if (t < it->second.t_last)
    throw TimestampRegressionError("memory write at t=" + std::to_string(t) +
                                   " precedes stored t=" + std::to_string(it->second.t_last));
  it->second.m = h;
  it->second.t_last = t;
}

void MemoryStore::reset() { slots_.clear(); }

}  // namespace qtg
