#include "surgeid/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "surgeid/frame_gate.hpp"
#include "surgeid/rng.hpp"

namespace surgeid {

void NoiseModel::validate() const {
  if (velocity_std < 0.0 || !std::isfinite(velocity_std))
    throw std::invalid_argument("NoiseModel: velocity_std must be non-negative");
  if (outlier_prob < 0.0 || outlier_prob > 1.0)
    throw std::invalid_argument("NoiseModel: outlier_prob must be in [0, 1]");
  if (outlier_mag < 0.0 || !std::isfinite(outlier_mag))
    throw std::invalid_argument("NoiseModel: outlier_mag must be non-negative");
}

void VehicleSpec::validate() const {
  truth.validate();
  noise.validate();
  if (!(v_max > 0.0) || !std::isfinite(v_max))
    throw std::invalid_argument("VehicleSpec: v_max must be positive");
  if (!(xi_max > 0.0) || !std::isfinite(xi_max))
    throw std::invalid_argument("VehicleSpec: xi_max must be positive");
  if (vehicle_id.empty() || vehicle_id.find_first_of(" \t\n,") != std::string::npos)
    throw std::invalid_argument("VehicleSpec: vehicle_id must be a single token");
}

MissionLog simulate(const VehicleSpec& spec, const MissionScript& script,
                    const std::string& run_id, int substeps) {
  spec.validate();
  script.validate(spec.xi_max);
  if (substeps < 1) throw std::invalid_argument("simulate: substeps must be >= 1");

  Rng rng(spec.seed);
  MissionLog log;
  log.vehicle_id = spec.vehicle_id;
  log.run_id = run_id;

  const double period = script.message_period;
  const long samples = static_cast<long>(std::floor(script.duration() / period + 0.5));
  if (samples < 1) throw std::invalid_argument("simulate: mission shorter than one sample");
  log.messages.reserve(static_cast<std::size_t>(samples) * 4);

  double v = 0.0;
  double theta = 0.0;
  double theta_prev = 0.0;
  for (long k = 0; k < samples; ++k) {
    const double t = static_cast<double>(k) * period;
    const auto s = script.sample(t);
    const double thetadot = k == 0 ? 0.0 : wrap_angle(theta - theta_prev) / period;

    if (!s.blackout) {
      double v_noisy = v;
      if (spec.noise.velocity_std > 0.0) v_noisy += spec.noise.velocity_std * rng.normal();
      if (rng.uniform() < spec.noise.outlier_prob)
        v_noisy += rng.uniform(-spec.noise.outlier_mag, spec.noise.outlier_mag);
      log.messages.push_back({t, Channel::velocity, v_noisy});
      log.messages.push_back({t, Channel::heading, wrap_angle(theta)});
      log.messages.push_back({t, Channel::thrust_left, s.xi_l});
      log.messages.push_back({t, Channel::thrust_right, s.xi_r});
    }

    theta_prev = theta;
    const double h = period / substeps;
    for (int i = 0; i < substeps; ++i)
      v = step(spec.truth, v, thetadot, s.xi_l, s.xi_r, h, spec.v_max);
    theta += s.heading_rate * period;
  }
  return log;
}

SurgeParams nominal_truth() {
  SurgeParams p;
  p.m = 40.0;
  p.c_q = -5.0;
  p.c_l = -2.0;
  p.c_thetadot = -1.0;
  p.thrust_left = {4.5, 11.0, -1.0};
  p.thrust_right = {4.5, 11.0, -1.0};
  return p;
}

std::vector<VehicleSpec> make_fleet(int count, std::uint64_t seed, double spread,
                                    NoiseModel noise, double v_max, double xi_max,
                                    bool couple_mass, const SurgeParams& nominal) {
  if (count < 1) throw std::invalid_argument("make_fleet: count must be positive");
  if (spread < 0.0 || spread >= 1.0)
    throw std::invalid_argument("make_fleet: spread must be in [0, 1)");

  std::vector<VehicleSpec> fleet;
  fleet.reserve(count);
  for (int i = 0; i < count; ++i) {
    Rng rng = Rng(seed).fork(static_cast<std::uint64_t>(i) + 1);
    const auto jitter = [&rng, spread](double x) {
      return x * (1.0 + spread * rng.uniform(-1.0, 1.0));
    };

    VehicleSpec spec;
    char id[16];
    std::snprintf(id, sizeof(id), "veh%02d", i + 1);
    spec.vehicle_id = id;
    spec.truth = nominal;
    spec.truth.c_q = jitter(nominal.c_q);
    spec.truth.c_l = jitter(nominal.c_l);
    spec.truth.c_thetadot = jitter(nominal.c_thetadot);
    spec.truth.thrust_left = {jitter(nominal.thrust_left.alpha),
                              jitter(nominal.thrust_left.beta),
                              jitter(nominal.thrust_left.gamma)};
    spec.truth.thrust_right = {jitter(nominal.thrust_right.alpha),
                               jitter(nominal.thrust_right.beta),
                               jitter(nominal.thrust_right.gamma)};
    spec.truth.m = couple_mass ? 8.0 * std::abs(spec.truth.c_q) : jitter(nominal.m);
    spec.v_max = v_max;
    spec.xi_max = xi_max;
    spec.noise = noise;
    spec.seed = Rng::splitmix(seed ^ (0x9e3779b97f4a7c15ull * (i + 1)));
    spec.truth.validate();
    fleet.push_back(spec);
  }
  return fleet;
}

}  // namespace surgeid
