#include "surgeid/crossval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

namespace surgeid {

namespace {

void parallel_for(long n, int threads, const std::function<void(long)>& fn) {
  if (n <= 0) return;
  long workers =
      threads > 0 ? threads : static_cast<long>(std::thread::hardware_concurrency());
  workers = std::max(1L, std::min(workers, n));
  if (workers == 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (long w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (long i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

PairResult run_pair(const EngineConfig& cfg, const SnapshotData& snap,
                    const MissionLog& log) {
  StreamEngine engine(cfg, replay_start(snap), StreamEngine::LearnMode::frozen);
  for (const auto& msg : log.messages) engine.push(msg);
  PairResult r;
  for (int m = 0; m < kMethodCount; ++m) {
    const auto& st = engine.metrics().stats(static_cast<Method>(m));
    r.mae[m] = st.mae();
    r.mse[m] = st.mse();
  }
  r.scored_frames = engine.metrics().stats(Method::ave).count;
  return r;
}

}  // namespace

SnapshotData replay_start(SnapshotData s) {
  s.aid_v_hat = 0.0;
  s.aid_skipped = 0;
  s.rnn_x_hat = 0.0;
  s.rnn_skipped = 0;
  s.rls_skipped = 0;
  s.gate = FrameGate::State{};
  s.gate_skipped = 0;
  s.has_last_frame = false;
  s.stream_time = 0.0;
  s.next_snapshot_time = 0.0;
  return s;
}

std::vector<PairResult> cross_validate(const EngineConfig& cfg,
                                       const std::vector<SnapshotData>& snapshots,
                                       const std::vector<MissionLog>& logs,
                                       int threads) {
  if (snapshots.empty()) throw std::invalid_argument("cross_validate: no snapshots");
  if (logs.empty()) throw std::invalid_argument("cross_validate: no logs");

  const long n = static_cast<long>(snapshots.size()) * static_cast<long>(logs.size());
  std::vector<PairResult> results(n);
  parallel_for(n, threads, [&](long i) {
    const int si = static_cast<int>(i / static_cast<long>(logs.size()));
    const int li = static_cast<int>(i % static_cast<long>(logs.size()));
    PairResult r = run_pair(cfg, snapshots[si], logs[li]);
    r.snapshot_index = si;
    r.log_index = li;
    results[i] = r;
  });
  return results;
}

DistributionSummary summarize_distribution(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("summarize_distribution: empty sample");
  std::sort(values.begin(), values.end());
  const auto quantile = [&values](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
  };
  DistributionSummary s;
  s.count = static_cast<long>(values.size());
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  const double iqr = s.q3 - s.q1;
  const double lo_fence = s.q1 - 1.5 * iqr, hi_fence = s.q3 + 1.5 * iqr;
  for (double v : values)
    if (v < lo_fence || v > hi_fence) s.outliers.push_back(v);
  return s;
}

CrossVehicleResult cross_vehicle_matrix(
    const EngineConfig& cfg, const std::vector<std::string>& vehicle_ids,
    const std::map<std::string, std::vector<SnapshotData>>& snapshots_by_vehicle,
    const std::map<std::string, std::vector<MissionLog>>& logs_by_vehicle,
    int threads) {
  const int v = static_cast<int>(vehicle_ids.size());
  if (v < 1) throw std::invalid_argument("cross_vehicle_matrix: no vehicles");
  for (const auto& id : vehicle_ids) {
    auto st = snapshots_by_vehicle.find(id);
    if (st == snapshots_by_vehicle.end() || st->second.empty())
      throw std::runtime_error("cross_vehicle_matrix: no snapshots for " + id);
    auto lt = logs_by_vehicle.find(id);
    if (lt == logs_by_vehicle.end() || lt->second.empty())
      throw std::runtime_error("cross_vehicle_matrix: no logs for " + id);
  }

  CrossVehicleResult out;
  out.vehicle_ids = vehicle_ids;
  out.best_snapshot_index.resize(v, 0);
  out.best_self_mse.resize(v, 0.0);
  out.mse.resize(v, v);

  // Self-validation pass selects each vehicle's best snapshot by combined
  // averaged-prediction MSE over its own logs.
  for (int i = 0; i < v; ++i) {
    const auto& snaps = snapshots_by_vehicle.at(vehicle_ids[i]);
    const auto& logs = logs_by_vehicle.at(vehicle_ids[i]);
    const auto pairs = cross_validate(cfg, snaps, logs, threads);
    std::vector<double> sq(snaps.size(), 0.0);
    std::vector<long> cnt(snaps.size(), 0);
    for (const auto& p : pairs) {
      sq[p.snapshot_index] += p.mse[static_cast<int>(Method::ave)] * p.scored_frames;
      cnt[p.snapshot_index] += p.scored_frames;
    }
    int best = 0;
    double best_mse = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < snaps.size(); ++s) {
      const double mse = cnt[s] ? sq[s] / cnt[s] : std::numeric_limits<double>::infinity();
      if (mse < best_mse) {
        best_mse = mse;
        best = static_cast<int>(s);
      }
    }
    out.best_snapshot_index[i] = best;
    out.best_self_mse[i] = best_mse;
  }

  struct Job {
    int i, j, log;
  };
  std::vector<Job> jobs;
  for (int i = 0; i < v; ++i)
    for (int j = 0; j < v; ++j)
      for (std::size_t l = 0; l < logs_by_vehicle.at(vehicle_ids[j]).size(); ++l)
        jobs.push_back({i, j, static_cast<int>(l)});

  std::vector<double> sq(static_cast<std::size_t>(v) * v, 0.0);
  std::vector<long> cnt(static_cast<std::size_t>(v) * v, 0);
  std::vector<PairResult> job_results(jobs.size());
  parallel_for(static_cast<long>(jobs.size()), threads, [&](long k) {
    const Job& job = jobs[k];
    const auto& snap =
        snapshots_by_vehicle.at(vehicle_ids[job.i])[out.best_snapshot_index[job.i]];
    const auto& log = logs_by_vehicle.at(vehicle_ids[job.j])[job.log];
    job_results[k] = run_pair(cfg, snap, log);
  });
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const auto idx = static_cast<std::size_t>(jobs[k].i) * v + jobs[k].j;
    sq[idx] += job_results[k].mse[static_cast<int>(Method::ave)] * job_results[k].scored_frames;
    cnt[idx] += job_results[k].scored_frames;
  }
  for (int i = 0; i < v; ++i)
    for (int j = 0; j < v; ++j) {
      const auto idx = static_cast<std::size_t>(i) * v + j;
      out.mse(i, j) = cnt[idx] ? sq[idx] / cnt[idx] : std::numeric_limits<double>::quiet_NaN();
    }
  return out;
}

}  // namespace surgeid
