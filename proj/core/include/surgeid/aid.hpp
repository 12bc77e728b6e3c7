#pragma once

#include <Eigen/Dense>

#include "surgeid/messages.hpp"

namespace surgeid {

// Physical parameter vector identified online:
//   (c_q, c_l, c_thetadot, alpha_L, beta_L, gamma_L, alpha_R, beta_R, gamma_R)
constexpr int kAidParamCount = 9;

using AidVector = Eigen::Matrix<double, kAidParamCount, 1>;

// Linear-in-parameters regressor for the surge dynamics at state (v, thetadot)
// under commands (xi_l, xi_r):
//   (|v|v, v, |thetadot*v|, xi_L, xi_L^2, xi_L*v, xi_R, xi_R^2, xi_R*v)
AidVector aid_regressor(double v, double thetadot, double xi_l, double xi_r);

struct AidConfig {
  double mass{40.0};  // assumed known
  double k_v{10.0};   // velocity-error feedback gain, 1/s
  AidVector gamma;    // per-parameter adaptation gains

  AidConfig();
  void validate() const;
};

// Gradient-descent adaptive identifier. Runs a velocity observer alongside a
// parameter estimate; both are driven by the observer error whenever a
// measurement is available.
class AidEstimator {
 public:
  explicit AidEstimator(const AidConfig& cfg);

  // Advances the observer by dt using the frame's inputs and returns the
  // velocity prediction for this frame (the observer state before any
  // measurement correction). When the frame carries a measurement the
  // regressor is evaluated at the measured velocity and both the observer
  // and the parameter estimate absorb the error. With adapt_params false the
  // parameter estimate is held fixed and only the observer runs.
  double update(const MeasurementFrame& frame, double dt, bool adapt_params = true);

  double v_hat() const { return v_hat_; }
  const AidVector& theta_hat() const { return theta_hat_; }
  void set_state(double v_hat, const AidVector& theta_hat);

  const AidConfig& config() const { return cfg_; }
  long skipped() const { return skipped_; }
  void set_skipped(long n) { skipped_ = n; }

 private:
  AidConfig cfg_;
  double v_hat_{0.0};
  AidVector theta_hat_{AidVector::Zero()};
  long skipped_{0};
};

}  // namespace surgeid
