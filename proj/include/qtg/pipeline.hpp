// End-to-end link prediction over a temporal stream: encode both endpoints,
// fuse with node memory, score the true item against a causal negative,
// backpropagate BCE, write memory, repeat. Evaluation replays the prefix of
// the stream exactly and ranks each held-out event against K negatives.

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qtg/encoding.hpp"
#include "qtg/memory.hpp"
#include "qtg/metrics.hpp"
#include "qtg/nn.hpp"
#include "qtg/stream.hpp"

namespace qtg {

struct RunConfig {
  EncoderConfig encoder;
  double lr = 1e-3;
  int batch = 32;   // gradient accumulation window, in events
  int epochs = 5;
  int eval_k = 20;  // ranked negatives per held-out event
  std::uint64_t seed = 42;
  Eigen::Index memory_dim = 64;
  Eigen::Index embedding_dim = 64;
};

void validate(const RunConfig& cfg);
void validate(const RunConfig& cfg, const Dataset& data);

enum class Split { kTrain, kVal, kTest };
Split parse_split(const std::string& name);
const char* to_string(Split s);

// all mutable state of one run; value type so it can be copied for probes
struct PipelineState {
  ParamStore params;
  Encoder encoder;
  MemoryStore memory;
  InteractionHistory history;
  NodeId n_users = 0;
  NodeId n_items = 0;

  // users and items share the memory/cache id space
  NodeId user_key(NodeId u) const { return u; }
  NodeId item_key(NodeId i) const { return n_users + i; }
};

// fresh state with seed-deterministic parameter init
PipelineState make_state(const Dataset& data, const RunConfig& cfg);

struct EventScores {
  double p_pos = 0.5;
  double p_neg = 0.5;
  double loss = 0.0;
};

// Processes one interaction against one sampled negative: scores both pairs,
// optionally accumulates gradients, then commits memory for the two true
// endpoints. The caller records the interaction in state.history afterwards.
EventScores process_event(const TemporalEvent& e, NodeId neg_item, PipelineState& state,
                          bool with_grad);

// replay-only variant: advances encoder, memory, and history without scoring
void advance_event(const TemporalEvent& e, PipelineState& state);

struct TrainLogRecord {
  int epoch = 0;
  std::uint64_t events = 0;
  double mean_loss = 0.0;
  double refresh_rate = 0.0;
  double seconds = 0.0;
};

struct TrainResult {
  ParamStore params;
  std::vector<TrainLogRecord> log;
};

// Reset-and-replay training: every epoch starts from empty memory and caches
// and walks the training prefix in order.
TrainResult train(const Dataset& data, const RunConfig& cfg);

struct EvalHooks {
  ReadoutFn readout;     // swapped in for the scored window only
  std::size_t limit = 0; // cap on scored events; 0 means the whole split
};

// Replays everything before the split exactly, then for each split event
// ranks the true item against eval_k causal negatives. Node state advances
// with the true endpoints after each scored event.
MetricsReport evaluate(const Dataset& data, Split split, const ParamStore& params,
                       const RunConfig& cfg, const EvalHooks& hooks = {});

}  // namespace qtg
