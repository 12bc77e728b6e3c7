#pragma once

#include <limits>

namespace surgeid {

// Thrust curve of one thruster: linear + quadratic in commanded propeller
// speed plus a speed-coupling term. alpha, beta >= 0 and gamma <= 0.
struct ThrustParams {
  double alpha{0.0};
  double beta{0.0};
  double gamma{0.0};

  void validate() const;
};

// 1-DOF surge plant parameters. m includes rigid-body and added mass.
// All drag coefficients are non-positive.
struct SurgeParams {
  double m{1.0};          // kg
  double c_q{0.0};        // kg/m, quadratic drag
  double c_l{0.0};        // kg/s, linear drag
  double c_thetadot{0.0}; // kg/rad, heading-rate cross drag
  ThrustParams thrust_left{};
  ThrustParams thrust_right{};

  void validate() const;
};

// Linear state scaling x = h*v with h = 1/(2*v_max), mapping the operating
// range [0, v_max] onto [0, 0.5].
struct ScaleMap {
  double v_max{1.0};

  double h() const { return 1.0 / (2.0 * v_max); }
  double scale(double v) const { return h() * v; }
  double unscale(double x) const { return x / h(); }

  void validate() const;
};

// Force produced by one thruster at command speed xi and surge speed v.
// Negative commands are clamped to zero: the plant model is only valid for
// forward operation.
double thrust(const ThrustParams& p, double xi, double v);

// Surge acceleration dv/dt.
double accel(const SurgeParams& p, double v, double thetadot, double xi_l, double xi_r);

// One forward-Euler step of the plant. The result is clamped to
// [0, v_max]. Throws std::invalid_argument when dt <= 0 or any input is
// non-finite.
double step(const SurgeParams& p, double v, double thetadot, double xi_l, double xi_r,
            double dt, double v_max = std::numeric_limits<double>::infinity());

// Largest time step below which the scaled discrete map is contracting,
// assuming commands bounded by xi_max and |thetadot| <= 1 rad/s:
//   dt_max = 2m / |2 v_max c_q + c_l + c_thetadot + (gamma_R + gamma_L) xi_max|
// Returns +infinity when the denominator vanishes (no constraint).
// Throws std::invalid_argument when xi_max <= 0.
double contraction_dt_bound(const SurgeParams& p, double v_max, double xi_max);

}  // namespace surgeid
