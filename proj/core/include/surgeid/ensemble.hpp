#pragma once

#include <Eigen/Dense>
#include <optional>

#include "surgeid/rls.hpp"

namespace surgeid {

inline double ensemble_average(double v_aid, double v_rnn, double v_rls) {
  return (v_aid + v_rnn + v_rls) / 3.0;
}

struct EnsembleConfig {
  double lambda_f{0.995};
  double p0{1e2};

  void validate() const;
};

// Fuses the three method outputs with weights fit by the same forgetting RLS
// recursion used for the thruster map, over the regressor
// (v_aid, v_rnn, v_rls) with no intercept. The fused output is always formed
// with the weights as they stood before seeing the current measurement.
class WeightedEnsemble {
 public:
  explicit WeightedEnsemble(const EnsembleConfig& cfg);

  double predict(double v_aid, double v_rnn, double v_rls) const;
  double fuse_update(double v_aid, double v_rnn, double v_rls,
                     std::optional<double> v_meas);

  Eigen::Vector3d weights() const { return rls_.zeta(); }
  const RecursiveLeastSquares& rls() const { return rls_; }
  RecursiveLeastSquares& rls() { return rls_; }
  const EnsembleConfig& config() const { return cfg_; }

 private:
  EnsembleConfig cfg_;
  RecursiveLeastSquares rls_;
};

// Ordinary least-squares weights over the whole dataset: rows of H are
// (v_aid, v_rnn, v_rls) and y the measured velocities. Reference point for
// the recursion and the optimality bound (each pure selector is feasible, so
// the fitted MSE cannot exceed any single component's).
Eigen::Vector3d ensemble_batch_weights(const Eigen::MatrixX3d& H,
                                       const Eigen::VectorXd& y);

}  // namespace surgeid
