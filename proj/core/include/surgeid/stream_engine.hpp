#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "surgeid/aid.hpp"
#include "surgeid/ensemble.hpp"
#include "surgeid/frame_gate.hpp"
#include "surgeid/messages.hpp"
#include "surgeid/metrics.hpp"
#include "surgeid/rls.hpp"
#include "surgeid/rnn.hpp"
#include "surgeid/snapshot.hpp"
#include "surgeid/surge_model.hpp"

namespace surgeid {

enum class RnnInputSet { commands_heading, commands_heading_rate };

int rnn_input_dim(RnnInputSet set);
Eigen::VectorXd build_rnn_input(const MeasurementFrame& frame, double xi_max,
                                RnnInputSet set);

struct EngineConfig {
  std::string vehicle_id{"vehicle"};
  std::string run_id{"run"};
  FrameGateConfig gate{};
  double v_max{2.5};
  double xi_max{1.0};
  RnnInputSet rnn_inputs{RnnInputSet::commands_heading};
  AidConfig aid{};
  RnnConfig rnn{};
  RlsConfig rls{};
  EnsembleConfig ensemble{};
  double snapshot_period{300.0};  // s of stream time; <= 0 disables cadence
  std::uint64_t seed{1};          // RNN weight init
  bool enable_aid{true};
  bool enable_rnn{true};
  bool enable_rls{true};

  void validate() const;
};

struct PredictionRecord {
  double t{0.0};
  std::optional<double> v_meas;
  double v_aid{0.0};
  double v_rnn{0.0};
  double v_rls{0.0};
  double v_ave{0.0};
  double v_we{0.0};
};

// Drives the full per-frame cycle: assemble a frame from raw messages,
// produce the three method predictions plus both fused outputs (all causal:
// formed before any weight has seen this frame's measurement), then let every
// estimator learn if a measurement arrived. Persists and restores complete
// state so a run split across sessions replays identically.
class StreamEngine {
 public:
  // In frozen mode only the ensemble fusion weights adapt; AID parameters,
  // RNN weights and the thruster map stay fixed while dynamic states (the
  // AID observer, the RNN recurrent state) still propagate. Used for
  // cross-validation replays.
  enum class LearnMode { full, frozen };

  explicit StreamEngine(const EngineConfig& cfg, LearnMode mode = LearnMode::full);
  StreamEngine(const EngineConfig& cfg, const SnapshotData& snap,
               LearnMode mode = LearnMode::full);

  // Feeds one message; returns a record when it completes a frame.
  std::optional<PredictionRecord> push(const Message& msg);

  // Processes an already-assembled frame.
  PredictionRecord tick(const MeasurementFrame& frame);

  // Enables cadence snapshots into dir.
  void set_snapshot_dir(const std::filesystem::path& dir);
  // Writes the shutdown snapshot; returns its path, or empty if no snapshot
  // directory is set or no frame was ever processed.
  std::filesystem::path finalize();

  SnapshotData snapshot() const;
  const MetricsAccumulator& metrics() const { return metrics_; }
  const EngineConfig& config() const { return cfg_; }
  bool has_stream_time() const { return has_last_frame_; }
  double stream_time() const { return last_frame_t_; }
  const std::vector<std::filesystem::path>& written_snapshots() const {
    return written_;
  }

  const AidEstimator& aid() const { return aid_; }
  const RnnEstimator& rnn() const { return rnn_; }
  const RlsEstimator& rls() const { return rls_; }
  const WeightedEnsemble& ensemble() const { return ensemble_; }
  const FrameGate& gate() const { return gate_; }
  const ScaleMap& scale() const { return scale_; }

 private:
  void maybe_persist(double t);
  std::filesystem::path write_snapshot(double stream_time);

  EngineConfig cfg_;
  LearnMode mode_;
  ScaleMap scale_;
  FrameGate gate_;
  AidEstimator aid_;
  RnnEstimator rnn_;
  RlsEstimator rls_;
  WeightedEnsemble ensemble_;
  MetricsAccumulator metrics_;

  bool has_last_frame_{false};
  double last_frame_t_{0.0};
  double next_snapshot_time_{0.0};
  std::optional<std::filesystem::path> snapshot_dir_;
  std::vector<std::filesystem::path> written_;
};

}  // namespace surgeid
