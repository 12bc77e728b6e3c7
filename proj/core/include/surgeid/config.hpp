#pragma once

#include <filesystem>
#include <string>

#include "surgeid/simulate.hpp"
#include "surgeid/stream_engine.hpp"

namespace surgeid {

// Everything an experiment needs, serializable to JSON so every output can
// echo the exact configuration it was produced under.
struct RunConfig {
  std::uint64_t seed{1};
  int threads{0};  // 0 = hardware concurrency

  EngineConfig engine{};

  // synthetic fleet + missions
  int fleet_size{8};
  double spread{0.3};
  bool couple_mass{true};
  NoiseModel noise{0.02, 0.002, 0.5};
  double mission_duration{1800.0};
  double message_period{0.1};
  int substeps{1};
  int runs_per_vehicle{1};
  SurgeParams nominal{nominal_truth()};

  void validate() const;
};

std::string to_json(const RunConfig& cfg);
// Strict parser: unknown keys, malformed values and failed validation all
// throw std::invalid_argument (configuration errors).
RunConfig run_config_from_json(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& file);
void save_run_config(const RunConfig& cfg, const std::filesystem::path& file);

const char* to_string(RnnInputSet set);

}  // namespace surgeid
