#include "surgeid/rnn.hpp"

#include <cmath>
#include <stdexcept>

#include "surgeid/rng.hpp"

namespace surgeid {

bool RnnWeights::all_finite() const {
  return a.allFinite() && w1.allFinite() && W2.allFinite() && b.allFinite();
}

RnnWeights RnnWeights::zeros(int n, int m) {
  RnnWeights w;
  w.a = Eigen::VectorXd::Zero(n);
  w.w1 = Eigen::VectorXd::Zero(n);
  w.W2 = Eigen::MatrixXd::Zero(n, m);
  w.b = Eigen::VectorXd::Zero(n);
  return w;
}

RnnWeights RnnWeights::random(const RnnConfig& cfg, Rng& rng) {
  const double s = cfg.resolved_init_scale();
  RnnWeights w = zeros(cfg.n, cfg.m);
  for (int i = 0; i < cfg.n; ++i) w.a[i] = rng.uniform(-s, s);
  for (int i = 0; i < cfg.n; ++i) w.w1[i] = rng.uniform(-s, s);
  for (int i = 0; i < cfg.n; ++i)
    for (int j = 0; j < cfg.m; ++j) w.W2(i, j) = rng.uniform(-s, s);
  for (int i = 0; i < cfg.n; ++i) w.b[i] = rng.uniform(-s, s);
  return w;
}

RnnTensors RnnTensors::zeros(int n, int m) {
  RnnTensors t;
  t.a = Eigen::VectorXd::Zero(n);
  t.w1 = Eigen::VectorXd::Zero(n);
  t.W2 = Eigen::MatrixXd::Zero(n, m);
  t.b = Eigen::VectorXd::Zero(n);
  return t;
}

AdamState AdamState::fresh(int n, int m) {
  AdamState s;
  s.m1 = RnnTensors::zeros(n, m);
  s.m2 = RnnTensors::zeros(n, m);
  s.t = 0;
  return s;
}

double rnn_forward(const RnnWeights& w, double x, const Eigen::VectorXd& u) {
  if (u.size() != w.W2.cols()) throw std::invalid_argument("rnn_forward: input dimension mismatch");
  const Eigen::VectorXd z = w.w1 * x + w.W2 * u + w.b;
  return w.a.dot(z.cwiseMax(0.0));
}

Eigen::ArrayXd penalty_multipliers(const RnnWeights& w) {
  const double lambda = 1.0 / (w.n() + 1);
  const Eigen::ArrayXd margin = w.a.array().abs() + lambda * w.w1.array().abs();
  return (margin > lambda).cast<double>();
}

double rnn_loss(const RnnWeights& w, double x_pred, double x_meas, double eta) {
  const double e = x_pred - x_meas;
  const Eigen::ArrayXd psi = penalty_multipliers(w);
  const double penalty = (psi * (w.a.array().square() + w.w1.array().square())).sum();
  return 0.5 * e * e + 0.5 * eta * penalty;
}

RnnTensors rnn_backprop(const RnnWeights& w, double x, const Eigen::VectorXd& u,
                        double x_meas, double eta) {
  const Eigen::VectorXd z = w.w1 * x + w.W2 * u + w.b;
  const Eigen::ArrayXd act = z.array().max(0.0);
  const Eigen::ArrayXd dact = (z.array() > 0.0).cast<double>();
  const double e = w.a.dot(act.matrix()) - x_meas;

  // e * a_i * relu'(z_i) is the shared backpropagated term per neuron.
  const Eigen::ArrayXd delta = e * w.a.array() * dact;

  const Eigen::ArrayXd psi = penalty_multipliers(w);
  RnnTensors g;
  g.a = (e * act + eta * psi * w.a.array()).matrix();
  g.w1 = (delta * x + eta * psi * w.w1.array()).matrix();
  g.W2 = delta.matrix() * u.transpose();
  g.b = delta.matrix();
  return g;
}

namespace {

void adam_update_block(Eigen::Ref<Eigen::VectorXd> w, Eigen::Ref<Eigen::VectorXd> m1,
                       Eigen::Ref<Eigen::VectorXd> m2, const Eigen::VectorXd& g,
                       const AdamConfig& c, double bc1, double bc2) {
  m1 = c.beta1 * m1 + (1.0 - c.beta1) * g;
  m2 = c.beta2 * m2.array().matrix() + (1.0 - c.beta2) * g.array().square().matrix();
  const Eigen::ArrayXd mhat = m1.array() / bc1;
  const Eigen::ArrayXd vhat = m2.array() / bc2;
  w.array() -= c.lr * mhat / (vhat.sqrt() + c.eps);
}

}  // namespace

void adam_step(RnnWeights& w, AdamState& s, const RnnTensors& grad, const AdamConfig& cfg) {
  s.t += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(s.t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(s.t));
  adam_update_block(w.a, s.m1.a, s.m2.a, grad.a, cfg, bc1, bc2);
  adam_update_block(w.w1, s.m1.w1, s.m2.w1, grad.w1, cfg, bc1, bc2);
  adam_update_block(w.b, s.m1.b, s.m2.b, grad.b, cfg, bc1, bc2);
  for (int j = 0; j < w.W2.cols(); ++j) {
    adam_update_block(w.W2.col(j), s.m1.W2.col(j), s.m2.W2.col(j), grad.W2.col(j), cfg, bc1, bc2);
  }
}

RnnEstimator::RnnEstimator(const RnnConfig& cfg, Rng& rng)
    : cfg_(cfg), weights_(RnnWeights::random(cfg, rng)), adam_(AdamState::fresh(cfg.n, cfg.m)) {}

RnnEstimator::RnnEstimator(const RnnConfig& cfg, RnnWeights weights)
    : cfg_(cfg), weights_(std::move(weights)), adam_(AdamState::fresh(cfg.n, cfg.m)) {}

double RnnEstimator::predict_and_learn(const Eigen::VectorXd& u, std::optional<double> x_meas) {
  if (!u.allFinite() || (x_meas && !std::isfinite(*x_meas))) {
    ++skipped_;
    return x_hat_;
  }
  // The prediction is scored against x_meas, so it must come from the
  // pre-update weights.
  const double x_pred = rnn_forward(weights_, x_hat_, u);
  if (x_meas) {
    const RnnTensors g = rnn_backprop(weights_, x_hat_, u, *x_meas, cfg_.eta);
    adam_step(weights_, adam_, g, cfg_.adam);
  }
  x_hat_ = x_pred;
  return x_pred;
}

}  // namespace surgeid
