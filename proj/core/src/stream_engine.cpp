#include "surgeid/stream_engine.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <stdexcept>

#include "surgeid/rng.hpp"

namespace surgeid {

int rnn_input_dim(RnnInputSet set) {
  switch (set) {
    case RnnInputSet::commands_heading: return 4;
    case RnnInputSet::commands_heading_rate: return 5;
  }
  throw std::invalid_argument("rnn_input_dim: unknown input set");
}

Eigen::VectorXd build_rnn_input(const MeasurementFrame& frame, double xi_max,
                                RnnInputSet set) {
  Eigen::VectorXd u(rnn_input_dim(set));
  u[0] = frame.xi_l / xi_max;
  u[1] = frame.xi_r / xi_max;
  u[2] = std::sin(frame.theta);
  u[3] = std::cos(frame.theta);
  if (set == RnnInputSet::commands_heading_rate) u[4] = frame.thetadot;
  return u;
}

void EngineConfig::validate() const {
  gate.validate();
  if (!(v_max > 0.0) || !std::isfinite(v_max))
    throw std::invalid_argument("EngineConfig: v_max must be positive");
  if (!(xi_max > 0.0) || !std::isfinite(xi_max))
    throw std::invalid_argument("EngineConfig: xi_max must be positive");
  if (rnn.m != rnn_input_dim(rnn_inputs))
    throw std::invalid_argument("EngineConfig: rnn.m does not match the input selection");
  if (rnn.n < 2) throw std::invalid_argument("EngineConfig: rnn.n must exceed 1");
  aid.validate();
  rls.validate();
  ensemble.validate();
  if (vehicle_id.empty() ||
      vehicle_id.find_first_of(" \t\n") != std::string::npos)
    throw std::invalid_argument("EngineConfig: vehicle_id must be a single token");
}

namespace {

RnnEstimator make_rnn(const EngineConfig& cfg) {
  Rng rng(cfg.seed);
  return RnnEstimator(cfg.rnn, rng);
}

RnnEstimator restore_rnn(const SnapshotData& snap) {
  RnnEstimator rnn(snap.rnn_cfg, snap.rnn_weights);
  rnn.adam() = snap.rnn_adam;
  rnn.set_state(snap.rnn_x_hat);
  rnn.set_skipped(snap.rnn_skipped);
  return rnn;
}

}  // namespace

StreamEngine::StreamEngine(const EngineConfig& cfg, LearnMode mode)
    : cfg_(cfg),
      mode_(mode),
      scale_{cfg.v_max},
      gate_(cfg.gate),
      aid_(cfg.aid),
      rnn_(make_rnn(cfg)),
      rls_(cfg.rls),
      ensemble_(cfg.ensemble) {
  cfg_.validate();
}

StreamEngine::StreamEngine(const EngineConfig& cfg, const SnapshotData& snap,
                           LearnMode mode)
    : cfg_(cfg),
      mode_(mode),
      scale_{cfg.v_max},
      gate_(cfg.gate),
      aid_(snap.aid_cfg),
      rnn_(restore_rnn(snap)),
      rls_(snap.rls_cfg),
      ensemble_(snap.ens_cfg) {
  cfg_.validate();
  if (snap.rnn_cfg.n != cfg_.rnn.n || snap.rnn_cfg.m != cfg_.rnn.m)
    throw std::invalid_argument(
        "StreamEngine: snapshot RNN dimensions do not match the configuration");

  aid_.set_state(snap.aid_v_hat, snap.aid_theta);
  aid_.set_skipped(snap.aid_skipped);
  rls_.rls().set_state(snap.rls_zeta, snap.rls_P);
  rls_.rls().set_resets(snap.rls_resets);
  rls_.set_skipped(snap.rls_skipped);
  ensemble_.rls().set_state(snap.ens_c, snap.ens_P);
  ensemble_.rls().set_resets(snap.ens_resets);
  gate_.set_state(snap.gate);
  gate_.set_skipped_messages(snap.gate_skipped);
  has_last_frame_ = snap.has_last_frame;
  last_frame_t_ = snap.stream_time;
  next_snapshot_time_ = snap.next_snapshot_time;
}

std::optional<PredictionRecord> StreamEngine::push(const Message& msg) {
  auto frame = gate_.push(msg);
  if (!frame) return std::nullopt;
  PredictionRecord rec = tick(*frame);
  maybe_persist(rec.t);
  return rec;
}

PredictionRecord StreamEngine::tick(const MeasurementFrame& frame) {
  PredictionRecord rec;
  rec.t = frame.t;
  rec.v_meas = frame.v_meas;
  const bool learn = mode_ == LearnMode::full;
  const double nan = std::nan("");

  rec.v_aid = nan;
  if (cfg_.enable_aid) {
    if (has_last_frame_ && frame.t > last_frame_t_) {
      // After a telemetry dropout the inter-frame gap can span seconds.
      // Crediting the whole gap to one Euler step would overdrive the
      // observer correction and the adaptation gains, so cap the step at
      // half the staleness window (the nominal message cadence).
      const double dt = std::min(frame.t - last_frame_t_, 0.5 * cfg_.gate.window);
      rec.v_aid = aid_.update(frame, dt, learn);
    } else {
      rec.v_aid = aid_.v_hat();  // startup: no interval to integrate over yet
    }
  }

  rec.v_rnn = nan;
  if (cfg_.enable_rnn) {
    const Eigen::VectorXd u = build_rnn_input(frame, cfg_.xi_max, cfg_.rnn_inputs);
    std::optional<double> x_meas;
    if (learn && frame.v_meas) x_meas = scale_.scale(*frame.v_meas);
    rec.v_rnn = scale_.unscale(rnn_.predict_and_learn(u, x_meas));
  }

  rec.v_rls = nan;
  if (cfg_.enable_rls) rec.v_rls = learn ? rls_.update(frame) : rls_.predict(frame);

  double sum = 0.0;
  int enabled = 0;
  for (double v : {rec.v_aid, rec.v_rnn, rec.v_rls}) {
    if (std::isfinite(v)) {
      sum += v;
      ++enabled;
    }
  }
  rec.v_ave = enabled ? sum / enabled : nan;
  rec.v_we = ensemble_.fuse_update(rec.v_aid, rec.v_rnn, rec.v_rls, frame.v_meas);

  if (frame.v_meas)
    metrics_.add(*frame.v_meas, rec.v_aid, rec.v_rnn, rec.v_rls, rec.v_ave, rec.v_we);

  if (!has_last_frame_) next_snapshot_time_ = frame.t + cfg_.snapshot_period;
  has_last_frame_ = true;
  last_frame_t_ = frame.t;
  return rec;
}

void StreamEngine::set_snapshot_dir(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  snapshot_dir_ = dir;
}

void StreamEngine::maybe_persist(double t) {
  if (!snapshot_dir_ || cfg_.snapshot_period <= 0.0 || !has_last_frame_) return;
  while (t >= next_snapshot_time_) {
    write_snapshot(next_snapshot_time_);
    next_snapshot_time_ += cfg_.snapshot_period;
  }
}

std::filesystem::path StreamEngine::finalize() {
  if (!snapshot_dir_ || !has_last_frame_) return {};
  return write_snapshot(last_frame_t_);
}

std::filesystem::path StreamEngine::write_snapshot(double stream_time) {
  const auto path = *snapshot_dir_ / snapshot_filename(cfg_.vehicle_id, stream_time);
  save_snapshot(snapshot(), path);
  written_.push_back(path);
  return path;
}

SnapshotData StreamEngine::snapshot() const {
  SnapshotData s;
  s.vehicle_id = cfg_.vehicle_id;
  s.run_id = cfg_.run_id;
  s.wall_time = static_cast<double>(std::time(nullptr));
  s.stream_time = last_frame_t_;

  s.aid_cfg = aid_.config();
  s.aid_v_hat = aid_.v_hat();
  s.aid_theta = aid_.theta_hat();
  s.aid_skipped = aid_.skipped();

  s.rnn_cfg = rnn_.config();
  s.rnn_weights = rnn_.weights();
  s.rnn_adam = rnn_.adam();
  s.rnn_x_hat = rnn_.state();
  s.rnn_skipped = rnn_.skipped();

  s.rls_cfg = rls_.config();
  s.rls_zeta = rls_.rls().zeta();
  s.rls_P = rls_.rls().P();
  s.rls_resets = rls_.rls().resets();
  s.rls_skipped = rls_.skipped();

  s.ens_cfg = ensemble_.config();
  s.ens_c = ensemble_.weights();
  s.ens_P = ensemble_.rls().P();
  s.ens_resets = ensemble_.rls().resets();

  s.certification = certify(rnn_.weights());
  s.equilibrium = find_equilibria(rnn_.weights());

  s.gate = gate_.state();
  s.gate_skipped = gate_.skipped_messages();
  s.has_last_frame = has_last_frame_;
  s.next_snapshot_time = next_snapshot_time_;
  return s;
}

}  // namespace surgeid
