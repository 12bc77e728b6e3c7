#include "surgeid/rls.hpp"

#include <cmath>
#include <stdexcept>

namespace surgeid {

RecursiveLeastSquares::RecursiveLeastSquares(int dim, double lambda_f, double p0,
                                             const Eigen::VectorXd& zeta0)
    : dim_(dim), lambda_f_(lambda_f), p0_(p0), zeta0_(zeta0) {
  if (dim <= 0) throw std::invalid_argument("RecursiveLeastSquares: dim must be positive");
  if (!(lambda_f > 0.0) || lambda_f > 1.0)
    throw std::invalid_argument("RecursiveLeastSquares: lambda_f must be in (0, 1]");
  if (!(p0 > 0.0) || !std::isfinite(p0))
    throw std::invalid_argument("RecursiveLeastSquares: p0 must be positive");
  if (zeta0.size() != dim)
    throw std::invalid_argument("RecursiveLeastSquares: zeta0 dimension mismatch");
  zeta_ = zeta0_;
  P_ = p0_ * Eigen::MatrixXd::Identity(dim_, dim_);
}

RecursiveLeastSquares::RecursiveLeastSquares(int dim, double lambda_f, double p0)
    : RecursiveLeastSquares(dim, lambda_f, p0, Eigen::VectorXd::Zero(dim)) {}

double RecursiveLeastSquares::predict(const Eigen::VectorXd& phi) const {
  if (phi.size() != dim_)
    throw std::invalid_argument("RecursiveLeastSquares: regressor dimension mismatch");
  return phi.dot(zeta_);
}

double RecursiveLeastSquares::update(const Eigen::VectorXd& phi, double y) {
  const double pred = predict(phi);
  if (!phi.allFinite() || !std::isfinite(y)) return pred;

  const Eigen::VectorXd p_phi = P_ * phi;
  const Eigen::VectorXd k = p_phi / (lambda_f_ + phi.dot(p_phi));
  zeta_ += k * (y - pred);
  P_ = (P_ - k * p_phi.transpose()) / lambda_f_;
  P_ = 0.5 * (P_ + P_.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P_, Eigen::EigenvaluesOnly);
  if (!P_.allFinite() || es.eigenvalues().minCoeff() < 1e-12) {
    P_ = p0_ * Eigen::MatrixXd::Identity(dim_, dim_);
    ++resets_;
  }
  return pred;
}

void RecursiveLeastSquares::set_state(const Eigen::VectorXd& zeta, const Eigen::MatrixXd& P) {
  if (zeta.size() != dim_ || P.rows() != dim_ || P.cols() != dim_)
    throw std::invalid_argument("RecursiveLeastSquares: state dimension mismatch");
  zeta_ = zeta;
  P_ = P;
}

Eigen::VectorXd rls_regressor(double xi_l, double xi_r, double theta, double thetadot) {
  Eigen::VectorXd phi(kRlsParamCount);
  phi << xi_r, xi_r * xi_r, xi_r * xi_r * xi_r,
         xi_l, xi_l * xi_l, xi_l * xi_l * xi_l,
         std::sin(theta), std::cos(theta), std::abs(thetadot);
  return phi;
}

void RlsConfig::validate() const {
  if (!(lambda_f > 0.0) || lambda_f > 1.0)
    throw std::invalid_argument("RlsConfig: lambda_f must be in (0, 1]");
  if (!(p0 > 0.0) || !std::isfinite(p0))
    throw std::invalid_argument("RlsConfig: p0 must be positive");
}

RlsEstimator::RlsEstimator(const RlsConfig& cfg)
    : cfg_(cfg), rls_(kRlsParamCount, cfg.lambda_f, cfg.p0) {
  cfg_.validate();
}

double RlsEstimator::predict(const MeasurementFrame& frame) const {
  return rls_.predict(rls_regressor(frame.xi_l, frame.xi_r, frame.theta, frame.thetadot));
}

double RlsEstimator::update(const MeasurementFrame& frame) {
  if (!frame.inputs_finite()) {
    ++skipped_;
    return 0.0;
  }
  const Eigen::VectorXd phi =
      rls_regressor(frame.xi_l, frame.xi_r, frame.theta, frame.thetadot);
  const double pred = rls_.predict(phi);
  if (frame.v_meas) rls_.update(phi, *frame.v_meas);
  return pred;
}

}  // namespace surgeid
