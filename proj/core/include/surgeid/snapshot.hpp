#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "surgeid/aid.hpp"
#include "surgeid/ensemble.hpp"
#include "surgeid/frame_gate.hpp"
#include "surgeid/rls.hpp"
#include "surgeid/rnn.hpp"
#include "surgeid/rnn_analysis.hpp"

namespace surgeid {

// Complete persisted state of one engine: estimator parameters, optimizer
// moments, dynamic states and gate bookkeeping, so a run split across
// sessions replays exactly like an uninterrupted one. Text key/value format,
// doubles written with 17 significant digits for bit-exact round-trips, with
// a terminal marker so truncated files are detected.
struct SnapshotData {
  std::string vehicle_id{"vehicle"};
  std::string run_id{"run"};
  double wall_time{0.0};
  double stream_time{0.0};

  AidConfig aid_cfg{};
  double aid_v_hat{0.0};
  AidVector aid_theta{AidVector::Zero()};
  long aid_skipped{0};

  RnnConfig rnn_cfg{};
  RnnWeights rnn_weights{};
  AdamState rnn_adam{};
  double rnn_x_hat{0.0};
  std::uint64_t rnn_skipped{0};

  RlsConfig rls_cfg{};
  Eigen::VectorXd rls_zeta{Eigen::VectorXd::Zero(kRlsParamCount)};
  Eigen::MatrixXd rls_P{1e3 * Eigen::MatrixXd::Identity(kRlsParamCount, kRlsParamCount)};
  long rls_resets{0};
  long rls_skipped{0};

  EnsembleConfig ens_cfg{};
  Eigen::Vector3d ens_c{Eigen::Vector3d::Constant(1.0 / 3.0)};
  Eigen::Matrix3d ens_P{1e2 * Eigen::Matrix3d::Identity()};
  long ens_resets{0};

  CertificationReport certification{};
  EquilibriumReport equilibrium{};

  FrameGate::State gate{};
  long gate_skipped{0};

  bool has_last_frame{false};
  double next_snapshot_time{0.0};
};

std::string serialize_snapshot(const SnapshotData& s);
// Throws std::runtime_error on any corruption: bad header, missing terminal
// marker, missing keys, dimension mismatches, unparseable numbers.
SnapshotData parse_snapshot(const std::string& text);

void save_snapshot(const SnapshotData& s, const std::filesystem::path& file);
SnapshotData load_snapshot(const std::filesystem::path& file);

// vehicle_id + zero-padded stream time; lexicographic order equals stream
// time order.
std::string snapshot_filename(const std::string& vehicle_id, double stream_time);

// Newest parseable snapshot for the vehicle, scanning filenames in
// descending order. Corrupted files are skipped with a warning on stderr.
std::optional<SnapshotData> load_latest_snapshot(const std::filesystem::path& dir,
                                                 const std::string& vehicle_id);

}  // namespace surgeid
