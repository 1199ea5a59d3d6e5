// Per-node temporal state: the last fused embedding and when it was written.
// Reads of unseen nodes return zeros at time 0; writes overwrite.

#pragma once

#include <unordered_map>

#include "qtg/common.hpp"

namespace qtg {

struct MemorySlot {
  Vector m;
  double t_last = 0.0;
};

class MemoryStore {
 public:
  explicit MemoryStore(Eigen::Index dim);

  // value copy; unseen nodes read as {zeros(dim), 0}
  MemorySlot get(NodeId node) const;

  // overwrites the slot. Throws ShapeMismatchError on a wrong-width h and
  // TimestampRegressionError when t is older than the stored t_last.
  void update(NodeId node, const Vector& h, double t);

  void reset();
  std::size_t size() const { return slots_.size(); }
  Eigen::Index dim() const { return dim_; }

 private:
  Eigen::Index dim_;
  std::unordered_map<NodeId, MemorySlot> slots_;
};

}  // namespace qtg
