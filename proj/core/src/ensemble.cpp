#include "surgeid/ensemble.hpp"

#include <cmath>
#include <stdexcept>

namespace surgeid {

void EnsembleConfig::validate() const {
  if (!(lambda_f > 0.0) || lambda_f > 1.0)
    throw std::invalid_argument("EnsembleConfig: lambda_f must be in (0, 1]");
  if (!(p0 > 0.0) || !std::isfinite(p0))
    throw std::invalid_argument("EnsembleConfig: p0 must be positive");
}

WeightedEnsemble::WeightedEnsemble(const EnsembleConfig& cfg)
    : cfg_(cfg),
      rls_(3, cfg.lambda_f, cfg.p0, Eigen::Vector3d::Constant(1.0 / 3.0)) {
  cfg_.validate();
}

double WeightedEnsemble::predict(double v_aid, double v_rnn, double v_rls) const {
  return rls_.predict(Eigen::Vector3d(v_aid, v_rnn, v_rls));
}

double WeightedEnsemble::fuse_update(double v_aid, double v_rnn, double v_rls,
                                     std::optional<double> v_meas) {
  const Eigen::Vector3d phi(v_aid, v_rnn, v_rls);
  const double fused = rls_.predict(phi);
  if (v_meas && std::isfinite(*v_meas) && phi.allFinite())
    rls_.update(phi, *v_meas);
  return fused;
}

Eigen::Vector3d ensemble_batch_weights(const Eigen::MatrixX3d& H,
                                       const Eigen::VectorXd& y) {
  if (H.rows() != y.size())
    throw std::invalid_argument("ensemble_batch_weights: row count mismatch");
  if (H.rows() < 1)
    throw std::invalid_argument("ensemble_batch_weights: empty dataset");
  return H.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y);
}

}  // namespace surgeid
