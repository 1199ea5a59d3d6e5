#include "qtg/nn.hpp"

#include <algorithm>
#include <cmath>

namespace qtg {

namespace {

constexpr double kProbClamp = 1e-7;

void check_shape(bool ok, const char* what) {
  if (!ok) throw ShapeMismatchError(what);
}

Vector relu(const Vector& v) { return v.cwiseMax(0.0); }

// subgradient 0 at exactly 0
Vector relu_mask(const Vector& pre) {
  return (pre.array() > 0.0).cast<double>().matrix();
}

}  // namespace

DenseLayer make_dense(Eigen::Index out_dim, Eigen::Index in_dim, Rng& rng) {
  DenseLayer l;
  l.W = Matrix(out_dim, in_dim);
  const double bound = 1.0 / std::sqrt(double(in_dim));
  // row-major fill order so the stream of draws is layout-independent
  for (Eigen::Index r = 0; r < out_dim; ++r)
    for (Eigen::Index c = 0; c < in_dim; ++c)
      l.W(r, c) = bound * (2.0 * rng.next_double() - 1.0);
  l.b = Vector(out_dim);
  for (Eigen::Index r = 0; r < out_dim; ++r) l.b[r] = bound * (2.0 * rng.next_double() - 1.0);
  l.grad_W = Matrix::Zero(out_dim, in_dim);
  l.grad_b = Vector::Zero(out_dim);
  l.m_W = Matrix::Zero(out_dim, in_dim);
  l.v_W = Matrix::Zero(out_dim, in_dim);
  l.m_b = Vector::Zero(out_dim);
  l.v_b = Vector::Zero(out_dim);
  return l;
}

ParamStore make_params(const Dims& dims, Rng& rng) {
  if (dims.memory < 1 || dims.embedding < 1 || dims.n_qubits < 1)
    throw ConfigError("model dimensions must be positive");
  ParamStore p;
  p.embed = make_dense(dims.embedding, dims.memory + dims.n_qubits, rng);
  p.score_hidden = make_dense(dims.embedding, 2 * dims.embedding, rng);
  p.score_out = make_dense(1, dims.embedding, rng);
  return p;
}

std::vector<TensorView> parameter_tensors(ParamStore& params) {
  return {
      {"embed.W", params.embed.W.data(), params.embed.W.rows(), params.embed.W.cols()},
      {"embed.b", params.embed.b.data(), params.embed.b.size(), 1},
      {"score_hidden.W", params.score_hidden.W.data(), params.score_hidden.W.rows(),
       params.score_hidden.W.cols()},
      {"score_hidden.b", params.score_hidden.b.data(), params.score_hidden.b.size(), 1},
      {"score_out.W", params.score_out.W.data(), params.score_out.W.rows(),
       params.score_out.W.cols()},
      {"score_out.b", params.score_out.b.data(), params.score_out.b.size(), 1},
  };
}

EmbedTape embed_forward(const ParamStore& params, const Vector& memory, const Vector& z) {
  check_shape(memory.size() + z.size() == params.embed.in_dim(),
              "embed input does not match layer width");
  EmbedTape t;
  t.input = Vector(memory.size() + z.size());
  t.input << memory, z;
  t.pre = params.embed.W * t.input + params.embed.b;
  t.h = relu(t.pre);
  return t;
}

void embed_backward(ParamStore& params, const EmbedTape& tape, const Vector& grad_h) {
  check_shape(grad_h.size() == params.embed.out_dim(), "embed grad width mismatch");
  const Vector dpre = grad_h.cwiseProduct(relu_mask(tape.pre));
  params.embed.grad_W.noalias() += dpre * tape.input.transpose();
  params.embed.grad_b += dpre;
}

ScoreTape score_forward(const ParamStore& params, const Vector& h_u, const Vector& h_i) {
  check_shape(h_u.size() + h_i.size() == params.score_hidden.in_dim(),
              "score input does not match layer width");
  ScoreTape t;
  t.input = Vector(h_u.size() + h_i.size());
  t.input << h_u, h_i;
  t.pre = params.score_hidden.W * t.input + params.score_hidden.b;
  t.hidden = relu(t.pre);
  t.logit = (params.score_out.W * t.hidden)(0) + params.score_out.b(0);
  t.p = 1.0 / (1.0 + std::exp(-t.logit));
  return t;
}

std::pair<Vector, Vector> score_backward(ParamStore& params, const ScoreTape& tape,
                                         double grad_logit) {
  params.score_out.grad_W.noalias() += grad_logit * tape.hidden.transpose();
  params.score_out.grad_b(0) += grad_logit;
  const Vector dhidden = grad_logit * params.score_out.W.transpose().col(0);
  const Vector dpre = dhidden.cwiseProduct(relu_mask(tape.pre));
  params.score_hidden.grad_W.noalias() += dpre * tape.input.transpose();
  params.score_hidden.grad_b += dpre;
  const Vector dinput = params.score_hidden.W.transpose() * dpre;
  const Eigen::Index half = dinput.size() / 2;
  return {dinput.head(half), dinput.tail(half)};
}

LossGrad bce_loss(double p, int label) {
  if (label != 0 && label != 1) throw ConfigError("bce label must be 0 or 1");
  const double q = std::clamp(p, kProbClamp, 1.0 - kProbClamp);
  LossGrad out;
  out.loss = label ? -std::log(q) : -std::log(1.0 - q);
  out.grad_p = label ? -1.0 / q : 1.0 / (1.0 - q);
  return out;
}

double bce_logit_grad(double p, int label) {
  if (label != 0 && label != 1) throw ConfigError("bce label must be 0 or 1");
  // inside the clamp the chain collapses to the classic p - y; outside it the
  // loss is flat in the logit, so the exact derivative is zero
  if (p < kProbClamp || p > 1.0 - kProbClamp) return 0.0;
  return p - double(label);
}

void adam_update(double* w, const double* g, double* m, double* v, Eigen::Index n,
                 const AdamConfig& cfg, long long step) {
  if (step < 1) throw ConfigError("adam step index starts at 1");
  const double bc1 = 1.0 - std::pow(cfg.beta1, double(step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, double(step));
  for (Eigen::Index i = 0; i < n; ++i) {
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
    const double m_hat = m[i] / bc1;
    const double v_hat = v[i] / bc2;
    w[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
  }
}

namespace {

template <typename Fn>
void for_each_tensor_triplet(ParamStore& p, Fn&& fn) {
  for (DenseLayer* l : {&p.embed, &p.score_hidden, &p.score_out}) {
    fn(l->W.data(), l->grad_W.data(), l->m_W.data(), l->v_W.data(), l->W.size());
    fn(l->b.data(), l->grad_b.data(), l->m_b.data(), l->v_b.data(), l->b.size());
  }
}

}  // namespace

void scale_gradients(ParamStore& params, double factor) {
  for (DenseLayer* l : {&params.embed, &params.score_hidden, &params.score_out}) {
    l->grad_W *= factor;
    l->grad_b *= factor;
  }
}

void zero_gradients(ParamStore& params) {
  for (DenseLayer* l : {&params.embed, &params.score_hidden, &params.score_out}) {
    l->grad_W.setZero();
    l->grad_b.setZero();
  }
}

void adam_step(ParamStore& params, const AdamConfig& cfg) {
  ++params.adam_steps;
  for_each_tensor_triplet(params, [&](double* w, double* g, double* m, double* v,
                                      Eigen::Index n) {
    adam_update(w, g, m, v, n, cfg, params.adam_steps);
  });
  zero_gradients(params);
}

}  // namespace qtg
