#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <string>
#include <vector>

#include "surgeid/log_io.hpp"
#include "surgeid/metrics.hpp"
#include "surgeid/snapshot.hpp"
#include "surgeid/stream_engine.hpp"

namespace surgeid {

// Strips a snapshot down to what a replay on fresh data should start from:
// learned parameters survive, per-run dynamic state (observer velocity,
// recurrent state, gate bookkeeping, clocks, counters) is cleared.
SnapshotData replay_start(SnapshotData s);

struct PairResult {
  int snapshot_index{0};
  int log_index{0};
  std::array<double, kMethodCount> mae{};
  std::array<double, kMethodCount> mse{};
  long scored_frames{0};
};

// Frozen-parameter replay of every (snapshot, log) pair: AID parameters, RNN
// weights and the thruster map stay as saved while the ensemble fusion
// weights keep adapting, as they would online. Pairs run on a thread pool;
// results come back sorted by (snapshot, log).
std::vector<PairResult> cross_validate(const EngineConfig& cfg,
                                       const std::vector<SnapshotData>& snapshots,
                                       const std::vector<MissionLog>& logs,
                                       int threads = 0);

struct DistributionSummary {
  long count{0};
  double min{0.0}, q1{0.0}, median{0.0}, q3{0.0}, max{0.0};
  std::vector<double> outliers;  // beyond 1.5 IQR box-plot whiskers
};
DistributionSummary summarize_distribution(std::vector<double> values);

struct CrossVehicleResult {
  std::vector<std::string> vehicle_ids;
  std::vector<int> best_snapshot_index;      // per vehicle, into its own list
  std::vector<double> best_self_mse;         // the selection criterion value
  Eigen::MatrixXd mse;                       // rows: model vehicle, cols: data vehicle
};

// Picks each vehicle's best snapshot (lowest self-validation MSE of the
// averaged prediction over the vehicle's own logs), then scores it on every
// vehicle's logs. Entry (i, j) is the combined averaged-prediction MSE of
// vehicle i's best snapshot over all of vehicle j's logs.
CrossVehicleResult cross_vehicle_matrix(
    const EngineConfig& cfg, const std::vector<std::string>& vehicle_ids,
    const std::map<std::string, std::vector<SnapshotData>>& snapshots_by_vehicle,
    const std::map<std::string, std::vector<MissionLog>>& logs_by_vehicle,
    int threads = 0);

}  // namespace surgeid
