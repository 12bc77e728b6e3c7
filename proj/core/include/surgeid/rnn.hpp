#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>

namespace surgeid {

class Rng;

struct AdamConfig {
  double lr{1e-3};
  double beta1{0.9};
  double beta2{0.999};
  double eps{1e-8};
};

struct RnnConfig {
  int n{20};  // neurons
  int m{4};   // exogenous inputs
  double eta{200.0};  // contraction-penalty weight
  AdamConfig adam{};
  // Half-width of the uniform weight init. Negative means the default
  // 1/(2(n+1)), which starts strictly inside the certified set.
  double init_scale{-1.0};

  double resolved_init_scale() const {
    return init_scale >= 0.0 ? init_scale : 1.0 / (2.0 * (n + 1));
  }
  int weight_count() const { return n * (m + 1) + 2 * n; }
};

// Weights of the shallow ReLU recurrence
//   x_{k+1} = a' relu(w1 x_k + W2 u + b).
struct RnnWeights {
  Eigen::VectorXd a;   // n
  Eigen::VectorXd w1;  // n
  Eigen::MatrixXd W2;  // n x m
  Eigen::VectorXd b;   // n

  int n() const { return static_cast<int>(a.size()); }
  int m() const { return static_cast<int>(W2.cols()); }
  bool all_finite() const;

  static RnnWeights zeros(int n, int m);
  static RnnWeights random(const RnnConfig& cfg, Rng& rng);
};

// Weight-shaped buffer, used for gradients and ADAM moments.
struct RnnTensors {
  Eigen::VectorXd a;
  Eigen::VectorXd w1;
  Eigen::MatrixXd W2;
  Eigen::VectorXd b;

  static RnnTensors zeros(int n, int m);
};

struct AdamState {
  RnnTensors m1;
  RnnTensors m2;
  std::int64_t t{0};

  static AdamState fresh(int n, int m);
};

// One evaluation of the recurrence.
double rnn_forward(const RnnWeights& w, double x, const Eigen::VectorXd& u);

// Per-neuron penalty multipliers: psi_i = 1 iff |a_i| + |w1_i|/(n+1) > 1/(n+1).
Eigen::ArrayXd penalty_multipliers(const RnnWeights& w);

// Squared prediction error plus the contraction penalty
//   1/2 (x_pred - x_meas)^2 + eta/2 sum_i psi_i (a_i^2 + w1_i^2).
double rnn_loss(const RnnWeights& w, double x_pred, double x_meas, double eta);

// Analytic gradient of rnn_loss at (x, u, x_meas). relu'(z) = 1 for z > 0
// and 0 otherwise; psi is held constant within the step.
RnnTensors rnn_backprop(const RnnWeights& w, double x, const Eigen::VectorXd& u,
                        double x_meas, double eta);

// Bias-corrected ADAM update, in place.
void adam_step(RnnWeights& w, AdamState& s, const RnnTensors& grad, const AdamConfig& cfg);

// Online one-step-ahead estimator. The recurrent state propagates on the
// model's own previous estimate; weights move only when a measurement is
// supplied.
class RnnEstimator {
 public:
  RnnEstimator(const RnnConfig& cfg, Rng& rng);
  RnnEstimator(const RnnConfig& cfg, RnnWeights weights);

  // Predicts the next scaled state from the current input vector, then
  // commits it as the estimator's own state. When x_meas is present the
  // prediction error drives one ADAM step first. Non-finite inputs leave
  // the estimator untouched and return the current state.
  double predict_and_learn(const Eigen::VectorXd& u, std::optional<double> x_meas);

  double state() const { return x_hat_; }
  void set_state(double x) { x_hat_ = x; }
  const RnnWeights& weights() const { return weights_; }
  RnnWeights& weights() { return weights_; }
  const AdamState& adam() const { return adam_; }
  AdamState& adam() { return adam_; }
  const RnnConfig& config() const { return cfg_; }
  std::uint64_t skipped() const { return skipped_; }
  void set_skipped(std::uint64_t c) { skipped_ = c; }

 private:
  RnnConfig cfg_;
  RnnWeights weights_;
  AdamState adam_;
  double x_hat_{0.0};
  std::uint64_t skipped_{0};
};

}  // namespace surgeid
