#include "qtg/pipeline.hpp"

#include <chrono>
#include <cmath>

namespace qtg {

namespace {

// substream tags hanging off the root seed
constexpr std::uint64_t kParamStream = 1;
constexpr std::uint64_t kTrainNegStreamBase = 1000;  // + epoch
constexpr std::uint64_t kEvalNegStreamBase = 2000;   // + split index

}  // namespace

void validate(const RunConfig& cfg) {
  validate(cfg.encoder);
  if (!(cfg.lr >= 0.0) || !std::isfinite(cfg.lr)) throw ConfigError("lr must be finite and >= 0");
  if (cfg.batch < 1) throw ConfigError("batch must be >= 1");
  if (cfg.epochs < 0) throw ConfigError("epochs must be >= 0");
  if (cfg.eval_k < 1) throw ConfigError("eval_k must be >= 1");
  if (cfg.memory_dim < 1 || cfg.embedding_dim < 1)
    throw ConfigError("model dimensions must be positive");
}

void validate(const RunConfig& cfg, const Dataset& data) {
  validate(cfg);
  if (data.events.empty()) throw EmptyDatasetError("dataset holds no events");
  if (cfg.encoder.encoding != Encoding::kAngle) {
    const Eigen::Index dim = Eigen::Index{1} << cfg.encoder.n_qubits;
    if (data.feature_dim > dim)
      throw ConfigError("feature dimension " + std::to_string(data.feature_dim) +
                        " does not fit in " + std::to_string(cfg.encoder.n_qubits) +
                        " qubits (max " + std::to_string(dim) + ")");
  }
}

Split parse_split(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  throw ConfigError("unknown split '" + name + "'");
}

const char* to_string(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "?";
}

PipelineState make_state(const Dataset& data, const RunConfig& cfg) {
  Rng param_rng = Rng(cfg.seed).fork(kParamStream);
  const Dims dims{cfg.memory_dim, cfg.embedding_dim, cfg.encoder.n_qubits};
  return PipelineState{make_params(dims, param_rng), Encoder(cfg.encoder),
                       MemoryStore(cfg.memory_dim), InteractionHistory{},
                       data.n_users, data.n_items};
}

namespace {

void check_params_fit(const ParamStore& params, const RunConfig& cfg) {
  const bool ok =
      params.embed.in_dim() == cfg.memory_dim + cfg.encoder.n_qubits &&
      params.embed.out_dim() == cfg.embedding_dim &&
      params.score_hidden.in_dim() == 2 * cfg.embedding_dim &&
      params.score_hidden.out_dim() == cfg.embedding_dim &&
      params.score_out.in_dim() == cfg.embedding_dim && params.score_out.out_dim() == 1;
  if (!ok) throw ShapeMismatchError("parameters do not match the configured dimensions");
}

}  // namespace

EventScores process_event(const TemporalEvent& e, NodeId neg_item, PipelineState& state,
                          bool with_grad) {
  const NodeId uk = state.user_key(e.src);
  const NodeId vk = state.item_key(e.dst);
  const NodeId nk = state.item_key(neg_item);

  const Vector z_u = state.encoder.observe(uk, e.features);
  const Vector z_v = state.encoder.observe(vk, e.features);
  const Vector z_n = state.encoder.query(nk, e.features);

  const EmbedTape tu = embed_forward(state.params, state.memory.get(uk).m, z_u);
  const EmbedTape tv = embed_forward(state.params, state.memory.get(vk).m, z_v);
  const EmbedTape tn = embed_forward(state.params, state.memory.get(nk).m, z_n);

  const ScoreTape sp = score_forward(state.params, tu.h, tv.h);
  const ScoreTape sn = score_forward(state.params, tu.h, tn.h);

  const LossGrad lp = bce_loss(sp.p, 1);
  const LossGrad ln = bce_loss(sn.p, 0);

  if (with_grad) {
    const auto [du_pos, dv] = score_backward(state.params, sp, bce_logit_grad(sp.p, 1));
    const auto [du_neg, dn] = score_backward(state.params, sn, bce_logit_grad(sn.p, 0));
    // the user embedding feeds both branches, so its gradient is the sum
    embed_backward(state.params, tu, du_pos + du_neg);
    embed_backward(state.params, tv, dv);
    embed_backward(state.params, tn, dn);
  }

  // memory commits after scoring, true endpoints only, detached values
  state.memory.update(uk, tu.h, e.t);
  state.memory.update(vk, tv.h, e.t);

  return {sp.p, sn.p, lp.loss + ln.loss};
}

void advance_event(const TemporalEvent& e, PipelineState& state) {
  const NodeId uk = state.user_key(e.src);
  const NodeId vk = state.item_key(e.dst);
  const Vector z_u = state.encoder.observe(uk, e.features);
  const Vector z_v = state.encoder.observe(vk, e.features);
  const Vector h_u = embed_forward(state.params, state.memory.get(uk).m, z_u).h;
  const Vector h_v = embed_forward(state.params, state.memory.get(vk).m, z_v).h;
  state.memory.update(uk, h_u, e.t);
  state.memory.update(vk, h_v, e.t);
  state.history.add(e.src, e.dst);
}

TrainResult train(const Dataset& data, const RunConfig& cfg) {
  validate(cfg, data);
  PipelineState state = make_state(data, cfg);
  const AdamConfig adam{cfg.lr, 0.9, 0.999, 1e-8};

  TrainResult out;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    state.encoder.reset();
    state.memory.reset();
    state.history.reset();
    Rng neg_rng = Rng(cfg.seed).fork(kTrainNegStreamBase + std::uint64_t(epoch));

    double loss_sum = 0.0;
    int pending = 0;
    for (std::size_t i = 0; i < data.train_end; ++i) {
      const TemporalEvent& e = data.events[i];
      const NodeId neg = sample_negative(e.src, state.history, data.n_items, neg_rng);
      loss_sum += process_event(e, neg, state, /*with_grad=*/true).loss;
      state.history.add(e.src, e.dst);
      if (++pending == cfg.batch) {
        scale_gradients(state.params, 1.0 / double(pending));
        adam_step(state.params, adam);
        pending = 0;
      }
    }
    if (pending > 0) {
      scale_gradients(state.params, 1.0 / double(pending));
      adam_step(state.params, adam);
    }

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::uint64_t n = data.train_end;
    out.log.push_back({epoch, n, n ? loss_sum / double(n) : 0.0,
                       state.encoder.refresh_rate(), seconds});
  }

  out.params = std::move(state.params);
  return out;
}

MetricsReport evaluate(const Dataset& data, Split split, const ParamStore& params,
                       const RunConfig& cfg, const EvalHooks& hooks) {
  validate(cfg, data);
  check_params_fit(params, cfg);

  std::size_t begin = 0, end = data.events.size();
  switch (split) {
    case Split::kTrain: begin = 0; end = data.train_end; break;
    case Split::kVal: begin = data.train_end; end = data.val_end; break;
    case Split::kTest: begin = data.val_end; end = data.events.size(); break;
  }
  if (begin >= end) throw EmptyQuerySetError(std::string("split '") + to_string(split) +
                                             "' holds no events");

  PipelineState state = make_state(data, cfg);
  state.params = params;
  for (std::size_t i = 0; i < begin; ++i) advance_event(data.events[i], state);

  // noise, if any, applies only to the scored window; the replay stays exact
  if (hooks.readout) state.encoder.set_readout(hooks.readout);

  const std::size_t split_index = std::size_t(split);
  Rng neg_rng = Rng(cfg.seed).fork(kEvalNegStreamBase + split_index);

  std::size_t limit = end - begin;
  if (hooks.limit > 0 && hooks.limit < limit) limit = hooks.limit;

  std::vector<double> ranks, pos_scores, neg_scores;
  ranks.reserve(limit);
  pos_scores.reserve(limit);
  neg_scores.reserve(limit * std::size_t(cfg.eval_k));

  for (std::size_t i = begin; i < begin + limit; ++i) {
    const TemporalEvent& e = data.events[i];
    const NodeId uk = state.user_key(e.src);
    const NodeId vk = state.item_key(e.dst);

    const Vector z_u = state.encoder.observe(uk, e.features);
    const Vector z_v = state.encoder.observe(vk, e.features);
    const EmbedTape tu = embed_forward(state.params, state.memory.get(uk).m, z_u);
    const EmbedTape tv = embed_forward(state.params, state.memory.get(vk).m, z_v);
    const double p_pos = score_forward(state.params, tu.h, tv.h).p;

    std::vector<double> negs(std::size_t(cfg.eval_k));
    for (int k = 0; k < cfg.eval_k; ++k) {
      const NodeId neg = sample_negative(e.src, state.history, data.n_items, neg_rng);
      const NodeId nk = state.item_key(neg);
      const Vector z_n = state.encoder.query(nk, e.features);
      const EmbedTape tn = embed_forward(state.params, state.memory.get(nk).m, z_n);
      negs[std::size_t(k)] = score_forward(state.params, tu.h, tn.h).p;
    }

    ranks.push_back(rank_of_positive(p_pos, negs));
    pos_scores.push_back(p_pos);
    neg_scores.insert(neg_scores.end(), negs.begin(), negs.end());

    state.memory.update(uk, tu.h, e.t);
    state.memory.update(vk, tv.h, e.t);
    state.history.add(e.src, e.dst);
  }

  const BinaryCounts counts = count_at_threshold(pos_scores, neg_scores);
  MetricsReport report;
  report.accuracy = counts.accuracy();
  report.precision = counts.precision();
  report.auc = auc_score(pos_scores, neg_scores);
  report.mrr = mean_reciprocal_rank(ranks);
  report.n_queries = ranks.size();
  return report;
}

}  // namespace qtg
