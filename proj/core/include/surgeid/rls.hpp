#pragma once

#include <Eigen/Dense>

#include "surgeid/messages.hpp"

namespace surgeid {

// Exponentially-forgetting recursive least squares with a diffuse prior.
// P is kept symmetric by construction and reset to the prior if it loses
// positive definiteness numerically.
class RecursiveLeastSquares {
 public:
  RecursiveLeastSquares(int dim, double lambda_f, double p0,
                        const Eigen::VectorXd& zeta0);
  RecursiveLeastSquares(int dim, double lambda_f, double p0);

  double predict(const Eigen::VectorXd& phi) const;
  // One recursion step against target y. Returns the pre-update prediction.
  double update(const Eigen::VectorXd& phi, double y);

  const Eigen::VectorXd& zeta() const { return zeta_; }
  const Eigen::MatrixXd& P() const { return P_; }
  double lambda_f() const { return lambda_f_; }
  int dim() const { return dim_; }
  long resets() const { return resets_; }

  void set_state(const Eigen::VectorXd& zeta, const Eigen::MatrixXd& P);
  void set_resets(long n) { resets_ = n; }

 private:
  int dim_;
  double lambda_f_;
  double p0_;
  Eigen::VectorXd zeta0_;
  Eigen::VectorXd zeta_;
  Eigen::MatrixXd P_;
  long resets_{0};
};

// Quasi-static basis over commands and heading:
//   (xi_R, xi_R^2, xi_R^3, xi_L, xi_L^2, xi_L^3, sin(theta), cos(theta), |thetadot|)
constexpr int kRlsParamCount = 9;
Eigen::VectorXd rls_regressor(double xi_l, double xi_r, double theta, double thetadot);

struct RlsConfig {
  double lambda_f{0.995};
  double p0{1e3};

  void validate() const;
};

// Direct velocity-map estimator: fits v as a static function of the current
// commands and heading. No recurrent state, so its prediction depends only on
// the frame at hand.
class RlsEstimator {
 public:
  explicit RlsEstimator(const RlsConfig& cfg);

  double predict(const MeasurementFrame& frame) const;
  // Predicts for this frame and, when a measurement is present, runs one RLS
  // step against it. Returns the pre-update prediction.
  double update(const MeasurementFrame& frame);

  const RecursiveLeastSquares& rls() const { return rls_; }
  RecursiveLeastSquares& rls() { return rls_; }
  const RlsConfig& config() const { return cfg_; }
  long skipped() const { return skipped_; }
  void set_skipped(long n) { skipped_ = n; }

 private:
  RlsConfig cfg_;
  RecursiveLeastSquares rls_;
  long skipped_{0};
};

}  // namespace surgeid
