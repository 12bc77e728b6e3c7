#include "surgeid/surge_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace surgeid {

void ThrustParams::validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0) || !(gamma <= 0.0)) {
    throw std::invalid_argument("ThrustParams: require alpha >= 0, beta >= 0, gamma <= 0");
  }
}

void SurgeParams::validate() const {
  if (!(m > 0.0)) throw std::invalid_argument("SurgeParams: mass must be positive");
  if (!(c_q <= 0.0) || !(c_l <= 0.0) || !(c_thetadot <= 0.0)) {
    throw std::invalid_argument("SurgeParams: drag coefficients must be non-positive");
  }
  thrust_left.validate();
  thrust_right.validate();
}

void ScaleMap::validate() const {
  if (!(v_max > 0.0) || !std::isfinite(v_max)) {
    throw std::invalid_argument("ScaleMap: v_max must be positive and finite");
  }
}

double thrust(const ThrustParams& p, double xi, double v) {
  const double cmd = std::max(xi, 0.0);
  return p.alpha * cmd + p.beta * cmd * cmd + p.gamma * cmd * v;
}

double accel(const SurgeParams& p, double v, double thetadot, double xi_l, double xi_r) {
  const double drag = p.c_q * std::abs(v) * v + p.c_l * v + p.c_thetadot * std::abs(thetadot * v);
  return (drag + thrust(p.thrust_left, xi_l, v) + thrust(p.thrust_right, xi_r, v)) / p.m;
}

double step(const SurgeParams& p, double v, double thetadot, double xi_l, double xi_r,
            double dt, double v_max) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("step: dt must be positive and finite");
  }
  if (!std::isfinite(v) || !std::isfinite(thetadot) || !std::isfinite(xi_l) || !std::isfinite(xi_r)) {
    throw std::invalid_argument("step: non-finite state or input");
  }
  const double v_next = v + dt * accel(p, v, thetadot, xi_l, xi_r);
  return std::clamp(v_next, 0.0, v_max);
}

double contraction_dt_bound(const SurgeParams& p, double v_max, double xi_max) {
  if (!(xi_max > 0.0)) throw std::invalid_argument("contraction_dt_bound: xi_max must be positive");
  const double denom = 2.0 * v_max * p.c_q + p.c_l + p.c_thetadot +
                       (p.thrust_left.gamma + p.thrust_right.gamma) * xi_max;
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * p.m / std::abs(denom);
}

}  // namespace surgeid
