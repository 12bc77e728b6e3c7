#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "surgeid/messages.hpp"
#include "surgeid/stream_engine.hpp"

namespace surgeid {

// One mission's telemetry: `timestamp,channel,value` lines under a single
// header line carrying the vehicle and run identifiers.
struct MissionLog {
  std::string vehicle_id{"vehicle"};
  std::string run_id{"run"};
  std::vector<Message> messages;
  long skipped_lines{0};  // unparseable lines encountered while reading
};

void write_mission_log(const MissionLog& log, const std::filesystem::path& file);
// Throws std::runtime_error when the file is missing or the header is not a
// mission-log header; malformed message lines are skipped and counted.
MissionLog read_mission_log(const std::filesystem::path& file);

// Per-frame prediction table: t, the measurement when present, the five
// predictions, and per-method absolute errors on measured frames.
void write_prediction_records(const std::vector<PredictionRecord>& records,
                              const std::string& vehicle_id, const std::string& run_id,
                              const std::filesystem::path& file);
std::vector<PredictionRecord> read_prediction_records(const std::filesystem::path& file);

}  // namespace surgeid
