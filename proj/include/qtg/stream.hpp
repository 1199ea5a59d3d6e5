// Temporal interaction streams: CSV parsing with strict schema and ordering
// checks, chronological splits, causal negative sampling, and a synthetic
// planted-community generator for end-to-end checks.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qtg/common.hpp"

namespace qtg {

struct TemporalEvent {
  NodeId src = 0;  // user, densified id
  NodeId dst = 0;  // item, densified id
  double t = 0.0;
  Vector features;
};

struct Dataset {
  std::vector<TemporalEvent> events;  // nondecreasing t
  NodeId n_users = 0;
  NodeId n_items = 0;
  Eigen::Index feature_dim = 0;
  std::size_t train_end = 0;  // [0, train_end) trains
  std::size_t val_end = 0;    // [train_end, val_end) validates, rest tests
};

// Expects header src,dst,t,f0,...,f{d-1} and chronologically ordered rows.
// Raw ids are densified to contiguous ranges in first-appearance order.
// Throws SchemaError / OrderError with 1-based line numbers, and plain
// DataError naming the path when the file cannot be opened.
Dataset parse_events_csv(const std::string& path);
Dataset parse_events_stream(std::istream& in, const std::string& origin);

// 70/15/15 chronological split by floor
void assign_splits(Dataset& data);

// Writes the same schema parse_events_csv reads, with full double precision.
void write_events_csv(const Dataset& data, const std::string& path);

// which items each user has already interacted with, strictly in the past
class InteractionHistory {
 public:
  void add(NodeId user, NodeId item) { seen_[user].insert(item); }
  bool contains(NodeId user, NodeId item) const;
  std::size_t count(NodeId user) const;
  const std::unordered_set<NodeId>& items_of(NodeId user) const;
  void reset() { seen_.clear(); }

 private:
  std::unordered_map<NodeId, std::unordered_set<NodeId>> seen_;
};

// Uniform draw over items the user has not interacted with yet; falls back
// to uniform over all items once the user has seen everything. Consumes
// exactly one bounded draw from rng either way.
NodeId sample_negative(NodeId user, const InteractionHistory& history, NodeId n_items,
                       Rng& rng);

struct SynthConfig {
  NodeId n_users = 50;
  NodeId n_items = 50;
  std::size_t n_events = 5000;
  double signal = 0.9;  // within-community preference strength in [0, 1]
  Eigen::Index feature_dim = 4;
  std::uint64_t seed = 7;
};

// Two planted communities (odd/even ids). Each event picks a user uniformly,
// then an item from the user's community with probability 0.5 + 0.5*signal.
// Features carry noisy community indicators for both endpoints.
Dataset synth_generate(const SynthConfig& cfg);

}  // namespace qtg
