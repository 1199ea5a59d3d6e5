// Dense layers with explicit forward tapes and hand-written reverse-mode
// gradients, binary cross-entropy, and Adam. Events arrive one at a time,
// so gradients accumulate in the layers until the optimiser step fires.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qtg/common.hpp"

namespace qtg {

struct DenseLayer {
  Matrix W;
  Vector b;
  Matrix grad_W;
  Vector grad_b;
  Matrix m_W, v_W;  // Adam first/second moments
  Vector m_b, v_b;

  Eigen::Index out_dim() const { return W.rows(); }
  Eigen::Index in_dim() const { return W.cols(); }
};

// uniform init in [-1/sqrt(in_dim), +1/sqrt(in_dim)], moments zeroed
DenseLayer make_dense(Eigen::Index out_dim, Eigen::Index in_dim, Rng& rng);

struct Dims {
  Eigen::Index memory = 64;
  Eigen::Index embedding = 64;
  int n_qubits = 8;
};

struct ParamStore {
  DenseLayer embed;         // (memory + n_qubits) -> embedding, ReLU
  DenseLayer score_hidden;  // 2*embedding -> embedding, ReLU
  DenseLayer score_out;     // embedding -> 1, sigmoid
  long long adam_steps = 0;
};

ParamStore make_params(const Dims& dims, Rng& rng);

// mutable views over every trainable tensor, in a fixed order; shared by
// checkpointing and the finite-difference tests
struct TensorView {
  std::string name;
  double* data;
  Eigen::Index rows;
  Eigen::Index cols;
};
std::vector<TensorView> parameter_tensors(ParamStore& params);

struct EmbedTape {
  Vector input;  // [memory; z]
  Vector pre;    // W input + b
  Vector h;      // relu(pre)
};

EmbedTape embed_forward(const ParamStore& params, const Vector& memory, const Vector& z);

// accumulates into embed gradients; grad_h is dLoss/dh
void embed_backward(ParamStore& params, const EmbedTape& tape, const Vector& grad_h);

struct ScoreTape {
  Vector input;   // [h_u; h_i]
  Vector pre;     // hidden pre-activation
  Vector hidden;  // relu(pre)
  double logit = 0.0;
  double p = 0.5;  // sigmoid(logit), unclamped
};

ScoreTape score_forward(const ParamStore& params, const Vector& h_u, const Vector& h_i);

// accumulates into scorer gradients; returns (dLoss/dh_u, dLoss/dh_i).
// grad_logit is dLoss/dlogit.
std::pair<Vector, Vector> score_backward(ParamStore& params, const ScoreTape& tape,
                                         double grad_logit);

struct LossGrad {
  double loss = 0.0;
  double grad_p = 0.0;  // dLoss/dp at the clamped probability
};

// -(y log p + (1-y) log(1-p)) with p clamped to [1e-7, 1 - 1e-7]
LossGrad bce_loss(double p, int label);

// dLoss/dlogit for the composed bce(clamp(sigmoid(logit))); zero in the
// clamped region where the true derivative vanishes
double bce_logit_grad(double p, int label);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// single-tensor rule, exposed for the optimiser tests:
//   m <- b1 m + (1-b1) g,  v <- b2 v + (1-b2) g^2
//   w <- w - lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
void adam_update(double* w, const double* g, double* m, double* v, Eigen::Index n,
                 const AdamConfig& cfg, long long step);

void scale_gradients(ParamStore& params, double factor);
void zero_gradients(ParamStore& params);

// applies one Adam step to every tensor, then zeroes the gradients
void adam_step(ParamStore& params, const AdamConfig& cfg);

}  // namespace qtg
