#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "surgeid/log_io.hpp"
#include "surgeid/mission.hpp"
#include "surgeid/surge_model.hpp"

namespace surgeid {

struct NoiseModel {
  double velocity_std{0.0};   // m/s, Gaussian
  double outlier_prob{0.0};   // per velocity sample
  double outlier_mag{0.0};    // m/s, uniform spike half-width

  void validate() const;
};

struct VehicleSpec {
  std::string vehicle_id{"veh01"};
  SurgeParams truth{};
  double v_max{2.5};
  double xi_max{1.0};
  NoiseModel noise{};
  std::uint64_t seed{1};

  void validate() const;
};

// Integrates the truth plant along the script and emits telemetry at the
// script's message period: velocity (noisy), heading, and both commands, in
// that order per sample. The truth uses the same backward-differenced heading
// rate a replay reconstructs, and one Euler step per period by default, so a
// noiseless log replays the plant exactly. substeps > 1 integrates the truth
// on a finer grid.
MissionLog simulate(const VehicleSpec& spec, const MissionScript& script,
                    const std::string& run_id, int substeps = 1);

// Reference vehicle used by the synthetic experiments. With xi_max = 1 the
// step response stays within v_max = 2.5 m/s and the contraction bound works
// out to roughly 2.7 s, an order of magnitude above the 0.1 s message period.
SurgeParams nominal_truth();

// Fleet with per-parameter uniform +-spread perturbations around the nominal,
// seeded deterministically. couple_mass keeps the known-mass convention
// m = 8|c_q| for each vehicle; otherwise m is perturbed independently.
std::vector<VehicleSpec> make_fleet(int count, std::uint64_t seed,
                                    double spread = 0.3, NoiseModel noise = {},
                                    double v_max = 2.5, double xi_max = 1.0,
                                    bool couple_mass = true,
                                    const SurgeParams& nominal = nominal_truth());

}  // namespace surgeid
