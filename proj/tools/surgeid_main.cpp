#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "surgeid/config.hpp"
#include "surgeid/crossval.hpp"
#include "surgeid/log_io.hpp"
#include "surgeid/rng.hpp"
#include "surgeid/simulate.hpp"
#include "surgeid/snapshot.hpp"
#include "surgeid/stream_engine.hpp"

namespace fs = std::filesystem;
using namespace surgeid;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Config echoed as comment lines so every output file records its provenance.
void echo_config(std::ostream& out, const RunConfig& cfg) {
  std::istringstream json(to_json(cfg));
  std::string line;
  while (std::getline(json, line)) out << "# " << line << '\n';
}

RunConfig load_config(const std::string& config_path, std::optional<std::uint64_t> seed) {
  RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
  if (seed) {
    cfg.seed = *seed;
    cfg.engine.seed = *seed;
  }
  return cfg;
}

std::uint64_t vehicle_engine_seed(const RunConfig& cfg, const std::string& vehicle_id) {
  std::uint64_t h = cfg.seed;
  for (char c : vehicle_id) h = Rng::splitmix(h ^ static_cast<std::uint64_t>(c));
  return h;
}

// The known-mass convention: when the log belongs to a fleet vehicle that the
// config can regenerate, the identifier is given that vehicle's mass, the way
// an operator would enter the boat's data sheet value.
void apply_vehicle_identity(RunConfig& cfg, const std::string& vehicle_id,
                            const std::string& run_id) {
  cfg.engine.vehicle_id = vehicle_id;
  cfg.engine.run_id = run_id;
  cfg.engine.seed = vehicle_engine_seed(cfg, vehicle_id);
  const auto fleet = make_fleet(cfg.fleet_size, cfg.seed, cfg.spread, cfg.noise,
                                cfg.engine.v_max, cfg.engine.xi_max, cfg.couple_mass,
                                cfg.nominal);
  for (const auto& spec : fleet) {
    if (spec.vehicle_id == vehicle_id) {
      cfg.engine.aid.mass = spec.truth.m;
      return;
    }
  }
}

struct LoadedSnapshot {
  std::string filename;
  SnapshotData data;
};

std::vector<LoadedSnapshot> load_vehicle_snapshots(const fs::path& dir,
                                                   const std::string& vehicle_id) {
  if (!fs::is_directory(dir))
    throw std::runtime_error("snapshot directory not found: " + dir.string());
  const std::string prefix = vehicle_id + "_";
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.rfind(prefix, 0) == 0 && name.size() > 5 &&
        name.compare(name.size() - 5, 5, ".snap") == 0)
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<LoadedSnapshot> out;
  for (const auto& f : files) {
    try {
      out.push_back({f.filename().string(), load_snapshot(f)});
    } catch (const std::exception& e) {
      std::cerr << "warning: skipping snapshot " << f.string() << ": " << e.what() << '\n';
    }
  }
  return out;
}

std::map<std::string, std::vector<MissionLog>> load_logs_grouped(
    const fs::path& dir, const std::string& vehicle_filter) {
  if (!fs::is_directory(dir)) throw std::runtime_error("log directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".log")
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::map<std::string, std::vector<MissionLog>> grouped;
  for (const auto& f : files) {
    try {
      MissionLog log = read_mission_log(f);
      if (!vehicle_filter.empty() && log.vehicle_id != vehicle_filter) continue;
      grouped[log.vehicle_id].push_back(std::move(log));
    } catch (const std::exception& e) {
      std::cerr << "warning: skipping log " << f.string() << ": " << e.what() << '\n';
    }
  }
  if (grouped.empty()) throw std::runtime_error("no usable logs in " + dir.string());
  return grouped;
}

int cmd_sim(const RunConfig& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const auto fleet = make_fleet(cfg.fleet_size, cfg.seed, cfg.spread, cfg.noise,
                                cfg.engine.v_max, cfg.engine.xi_max, cfg.couple_mass,
                                cfg.nominal);
  int written = 0;
  for (const auto& spec : fleet) {
    for (int r = 0; r < cfg.runs_per_vehicle; ++r) {
      Rng mission_rng = Rng(spec.seed).fork(1000 + static_cast<std::uint64_t>(r));
      const auto script = make_training_mission(cfg.mission_duration, cfg.engine.xi_max,
                                                mission_rng, cfg.message_period);
      char run_id[16];
      std::snprintf(run_id, sizeof(run_id), "run%02d", r + 1);
      const MissionLog log = simulate(spec, script, run_id, cfg.substeps);
      const fs::path file = out_dir / (spec.vehicle_id + "_" + run_id + ".log");
      write_mission_log(log, file);
      std::cout << "wrote " << file.string() << " (" << log.messages.size()
                << " messages)\n";
      ++written;
    }
  }
  save_run_config(cfg, out_dir / "config_echo.json");
  std::cout << "simulated " << written << " mission logs for " << fleet.size()
            << " vehicles\n";
  return kExitOk;
}

int cmd_learn(RunConfig cfg, const fs::path& log_path, const fs::path& snapshot_dir,
              const fs::path& out_path) {
  const MissionLog log = read_mission_log(log_path);
  if (log.messages.empty()) throw std::runtime_error("log has no messages: " + log_path.string());
  if (log.skipped_lines > 0)
    std::cerr << "warning: skipped " << log.skipped_lines << " corrupt log lines\n";
  apply_vehicle_identity(cfg, log.vehicle_id, log.run_id);

  std::optional<SnapshotData> snap = load_latest_snapshot(snapshot_dir, log.vehicle_id);
  std::unique_ptr<StreamEngine> engine;
  if (snap) {
    // A log whose clock continues past the snapshot is the same interrupted
    // stream: restore everything. A log that starts over is a new mission:
    // keep learned parameters, start dynamics fresh.
    const bool continuation = snap->has_last_frame && log.messages.front().t > snap->stream_time;
    engine = std::make_unique<StreamEngine>(cfg.engine,
                                            continuation ? *snap : replay_start(*snap));
    std::cout << "resumed from snapshot (stream_time " << fmt(snap->stream_time)
              << (continuation ? ", continuation" : ", new mission") << ")\n";
  } else {
    engine = std::make_unique<StreamEngine>(cfg.engine);
    std::cout << "no snapshot found, starting fresh\n";
  }
  engine->set_snapshot_dir(snapshot_dir);

  std::vector<PredictionRecord> records;
  for (const auto& msg : log.messages) {
    if (auto rec = engine->push(msg)) records.push_back(*rec);
  }
  engine->finalize();

  if (!out_path.empty()) {
    write_prediction_records(records, log.vehicle_id, log.run_id, out_path);
    std::cout << "wrote " << records.size() << " prediction records to "
              << out_path.string() << '\n';
  }
  std::cout << "frames " << records.size() << " snapshots "
            << engine->written_snapshots().size() << " skipped_messages "
            << engine->gate().skipped_messages() << '\n';
  for (int m = 0; m < kMethodCount; ++m) {
    const auto& st = engine->metrics().stats(static_cast<Method>(m));
    std::cout << to_string(static_cast<Method>(m)) << " mae " << fmt(st.mae()) << " mse "
              << fmt(st.mse()) << " scored " << st.count << '\n';
  }
  return kExitOk;
}

int cmd_certify(const fs::path& snapshot_path) {
  const SnapshotData snap = load_snapshot(snapshot_path);
  const CertificationReport cert = certify(snap.rnn_weights);
  const EquilibriumReport eq = find_equilibria(snap.rnn_weights);

  std::cout << "vehicle " << snap.vehicle_id << " run " << snap.run_id << " stream_time "
            << fmt(snap.stream_time) << '\n';
  std::cout << "theorem3 " << (cert.theorem3_ok ? "PASS" : "FAIL") << " (value "
            << fmt(cert.theorem3_value) << " vs bound "
            << fmt(1.0 / (snap.rnn_weights.n() + 1)) << ")\n";
  std::cout << "gersgorin " << (cert.gersgorin_ok ? "PASS" : "FAIL") << '\n';
  std::cout << "m_psd " << (cert.m_psd_ok ? "PASS" : "FAIL") << " (min eigenvalue "
            << fmt(cert.min_eigenvalue_of_m) << ")\n";
  std::cout << "contraction_ratio_bound " << fmt(contraction_ratio_bound(snap.rnn_weights))
            << '\n';
  if (!cert.violating_neurons.empty()) {
    std::cout << "violating_neurons";
    for (int i : cert.violating_neurons) std::cout << ' ' << i;
    std::cout << '\n';
  }
  std::cout << "critical_values";
  for (double c : eq.critical_values) std::cout << ' ' << fmt(c);
  std::cout << '\n';
  std::cout << "equilibria " << eq.equilibria.size() << '\n';
  for (const auto& e : eq.equilibria)
    std::cout << "  x " << fmt(e.x) << " slope " << fmt(e.slope) << " class "
              << to_string(e.cls) << '\n';
  if (eq.has_marginal_segment) {
    std::cout << "marginal_segments";
    for (const auto& [lo, hi] : eq.marginal_segments)
      std::cout << " [" << fmt(lo) << ", " << fmt(hi) << "]";
    std::cout << '\n';
  }
  return kExitOk;
}

int cmd_crossval(const RunConfig& cfg, const fs::path& snapshot_dir, const fs::path& log_dir,
                 const fs::path& out_path, const std::string& vehicle_filter) {
  const auto grouped = load_logs_grouped(log_dir, vehicle_filter);
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + out_path.string() + " for writing");
  out << "# surgeid crossval\n";
  echo_config(out, cfg);
  out << "pair,vehicle,snapshot,log,method,mae,mse,scored\n";

  bool any = false;
  std::vector<std::string> summary_lines;
  for (const auto& [vehicle, logs] : grouped) {
    const auto snaps = load_vehicle_snapshots(snapshot_dir, vehicle);
    if (snaps.empty()) {
      std::cerr << "warning: no snapshots for " << vehicle << ", skipping\n";
      continue;
    }
    any = true;
    std::vector<SnapshotData> snap_data;
    snap_data.reserve(snaps.size());
    for (const auto& s : snaps) snap_data.push_back(s.data);
    const auto pairs = cross_validate(cfg.engine, snap_data, logs, cfg.threads);

    std::array<std::vector<double>, kMethodCount> mae_dist;
    for (const auto& p : pairs) {
      for (int m = 0; m < kMethodCount; ++m) {
        out << "pair," << vehicle << ',' << snaps[p.snapshot_index].filename << ','
            << logs[p.log_index].run_id << ',' << to_string(static_cast<Method>(m)) << ','
            << fmt(p.mae[m]) << ',' << fmt(p.mse[m]) << ',' << p.scored_frames << '\n';
        mae_dist[m].push_back(p.mae[m]);
      }
    }
    for (int m = 0; m < kMethodCount; ++m) {
      const auto s = summarize_distribution(mae_dist[m]);
      std::ostringstream line;
      line << "summary," << vehicle << ',' << to_string(static_cast<Method>(m)) << ",mae,"
           << s.count << ',' << fmt(s.min) << ',' << fmt(s.q1) << ',' << fmt(s.median) << ','
           << fmt(s.q3) << ',' << fmt(s.max) << ',' << s.outliers.size();
      summary_lines.push_back(line.str());
    }
  }
  if (!any) throw std::runtime_error("no (snapshot, log) pairs to validate");
  out << "summary_header,vehicle,method,metric,count,min,q1,median,q3,max,n_outliers\n";
  for (const auto& line : summary_lines) out << line << '\n';
  std::cout << "wrote " << out_path.string() << '\n';
  return kExitOk;
}

int cmd_xveh(const RunConfig& cfg, const fs::path& snapshot_dir, const fs::path& log_dir,
             const fs::path& out_path) {
  const auto grouped = load_logs_grouped(log_dir, "");
  std::vector<std::string> vehicles;
  std::map<std::string, std::vector<SnapshotData>> snaps_by_vehicle;
  std::map<std::string, std::vector<std::string>> names_by_vehicle;
  for (const auto& [vehicle, logs] : grouped) {
    auto snaps = load_vehicle_snapshots(snapshot_dir, vehicle);
    if (snaps.empty()) throw std::runtime_error("no snapshots for vehicle " + vehicle);
    vehicles.push_back(vehicle);
    for (auto& s : snaps) {
      snaps_by_vehicle[vehicle].push_back(std::move(s.data));
      names_by_vehicle[vehicle].push_back(s.filename);
    }
  }

  std::map<std::string, std::vector<MissionLog>> logs_by_vehicle;
  for (const auto& [vehicle, logs] : grouped) logs_by_vehicle[vehicle] = logs;
  const auto result =
      cross_vehicle_matrix(cfg.engine, vehicles, snaps_by_vehicle, logs_by_vehicle, cfg.threads);

  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + out_path.string() + " for writing");
  out << "# surgeid cross-vehicle MSE matrix (rows: model vehicle, cols: data vehicle)\n";
  echo_config(out, cfg);
  for (std::size_t i = 0; i < vehicles.size(); ++i)
    out << "best," << vehicles[i] << ','
        << names_by_vehicle[vehicles[i]][result.best_snapshot_index[i]] << ','
        << fmt(result.best_self_mse[i]) << '\n';
  out << "matrix";
  for (const auto& v : vehicles) out << ',' << v;
  out << '\n';
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    out << vehicles[i];
    for (std::size_t j = 0; j < vehicles.size(); ++j) out << ',' << fmt(result.mse(i, j));
    out << '\n';
  }
  std::cout << "wrote " << out_path.string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online surge-dynamics identification: simulate, learn, certify, validate"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "JSON run configuration (defaults apply if omitted)");
  app.add_option("--seed", seed, "Override the master seed");

  auto* sim = app.add_subcommand("sim", "Generate synthetic fleet mission logs");
  std::string sim_out = "logs";
  sim->add_option("--out", sim_out, "Output directory for mission logs");

  auto* learn = app.add_subcommand("learn", "Stream a mission log through the estimators");
  std::string learn_log, learn_snap_dir = "snapshots", learn_out;
  learn->add_option("--log", learn_log, "Mission log to process")->required();
  learn->add_option("--snapshot-dir", learn_snap_dir, "Snapshot directory (load + save)");
  learn->add_option("--out", learn_out, "Prediction records CSV (omit to skip)");

  auto* certify_cmd = app.add_subcommand("certify", "Report contraction certificates and equilibria");
  std::string cert_snapshot, cert_snap_dir, cert_vehicle;
  certify_cmd->add_option("--snapshot", cert_snapshot, "Snapshot file");
  certify_cmd->add_option("--snapshot-dir", cert_snap_dir, "Directory to search instead");
  certify_cmd->add_option("--vehicle", cert_vehicle, "Vehicle id for --snapshot-dir search");

  auto* crossval_cmd = app.add_subcommand("crossval", "Frozen-replay cross-validation");
  std::string cv_snap_dir = "snapshots", cv_log_dir = "logs", cv_out = "crossval.csv", cv_vehicle;
  crossval_cmd->add_option("--snapshot-dir", cv_snap_dir, "Snapshot directory");
  crossval_cmd->add_option("--log-dir", cv_log_dir, "Mission log directory");
  crossval_cmd->add_option("--out", cv_out, "Output file");
  crossval_cmd->add_option("--vehicle", cv_vehicle, "Restrict to one vehicle");

  auto* xveh = app.add_subcommand("xveh", "Cross-vehicle MSE matrix over best snapshots");
  std::string xv_snap_dir = "snapshots", xv_log_dir = "logs", xv_out = "xveh.csv";
  xveh->add_option("--snapshot-dir", xv_snap_dir, "Snapshot directory");
  xveh->add_option("--log-dir", xv_log_dir, "Mission log directory");
  xveh->add_option("--out", xv_out, "Output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    const RunConfig cfg = load_config(config_path, seed);
    if (sim->parsed()) return cmd_sim(cfg, sim_out);
    if (learn->parsed()) return cmd_learn(cfg, learn_log, learn_snap_dir, learn_out);
    if (certify_cmd->parsed()) {
      fs::path target = cert_snapshot;
      if (target.empty()) {
        if (cert_snap_dir.empty() || cert_vehicle.empty())
          throw std::invalid_argument("certify needs --snapshot or --snapshot-dir with --vehicle");
        const auto snaps = load_vehicle_snapshots(cert_snap_dir, cert_vehicle);
        if (snaps.empty())
          throw std::runtime_error("no snapshots for vehicle " + cert_vehicle);
        target = fs::path(cert_snap_dir) / snaps.back().filename;
      }
      return cmd_certify(target);
    }
    if (crossval_cmd->parsed())
      return cmd_crossval(cfg, cv_snap_dir, cv_log_dir, cv_out, cv_vehicle);
    if (xveh->parsed()) return cmd_xveh(cfg, xv_snap_dir, xv_log_dir, xv_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}
