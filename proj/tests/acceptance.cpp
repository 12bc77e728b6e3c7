// Acceptance gate for the identification engine. Each criterion prints one
// PASS/FAIL line with its key numbers and runtime; the exit code is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "surgeid/crossval.hpp"
#include "surgeid/frame_gate.hpp"
#include "surgeid/log_io.hpp"
#include "surgeid/mission.hpp"
#include "surgeid/rng.hpp"
#include "surgeid/rnn.hpp"
#include "surgeid/rnn_analysis.hpp"
#include "surgeid/simulate.hpp"
#include "surgeid/snapshot.hpp"
#include "surgeid/stream_engine.hpp"
#include "surgeid/surge_model.hpp"

using namespace surgeid;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok{false};
  std::string detail;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Shared random model draws for the certificate criteria.

struct DrawSet {
  int n;
  std::vector<RnnWeights> all;
};

const std::vector<DrawSet>& certificate_draws() {
  static const std::vector<DrawSet> sets = [] {
    std::vector<DrawSet> out;
    for (int n : {2, 5, 20}) {
      DrawSet d;
      d.n = n;
      Rng rng(100 + static_cast<std::uint64_t>(n));
      d.all.reserve(1000);
      for (int i = 0; i < 1000; ++i) {
        RnnConfig cfg;
        cfg.n = n;
        cfg.m = 4;
        cfg.init_scale = rng.uniform(0.1, 2.0) / (n + 1);
        d.all.push_back(RnnWeights::random(cfg, rng));
      }
      out.push_back(std::move(d));
    }
    return out;
  }();
  return sets;
}

Outcome certificate_implication_chain() {
  int draws = 0, certified = 0, mid_tier = 0, counterexamples = 0;
  for (const auto& set : certificate_draws()) {
    for (const auto& w : set.all) {
      ++draws;
      const CertificationReport c = certify(w);
      if (c.theorem3_ok) ++certified;
      if (c.gersgorin_ok && !c.theorem3_ok) ++mid_tier;
      if (c.theorem3_ok && !c.gersgorin_ok) ++counterexamples;
      if (c.gersgorin_ok && !c.m_psd_ok) ++counterexamples;
      if (c.gersgorin_ok && c.min_eigenvalue_of_m < -1e-9) ++counterexamples;
    }
  }
  Outcome o;
  o.ok = counterexamples == 0 && certified > 0 && certified < draws;
  std::ostringstream s;
  s << draws << " draws, " << certified << " certified, " << mid_tier
    << " disc-only, " << counterexamples << " counterexamples";
  o.detail = s.str();
  return o;
}

Outcome empirical_contraction() {
  long models = 0, violations = 0;
  double worst_k = 0.0, worst_excess = -1.0;
  std::uint64_t salt = 0;
  for (const auto& set : certificate_draws()) {
    Eigen::VectorXd u(4);
    for (const auto& w : set.all) {
      ++salt;
      if (!certify(w).theorem3_ok) continue;
      ++models;
      const double k = contraction_ratio_bound(w);
      if (!(k < 1.0)) {
        ++violations;
        continue;
      }
      worst_k = std::max(worst_k, k);
      Rng rng(7000 + salt);
      for (int p = 0; p < 10000; ++p) {
        const double x1 = rng.uniform(-1.0, 2.0);
        const double x2 = rng.uniform(-1.0, 2.0);
        if (x1 == x2) continue;
        for (int j = 0; j < 4; ++j) u[j] = rng.uniform(-2.0, 2.0);
        const double d = std::abs(rnn_forward(w, x1, u) - rnn_forward(w, x2, u));
        const double excess = d - k * std::abs(x1 - x2);
        worst_excess = std::max(worst_excess, excess);
        if (excess > 1e-12) ++violations;
      }
    }
  }
  Outcome o;
  o.ok = violations == 0 && models > 0;
  std::ostringstream s;
  s << models << " certified models x 10^4 pairs, " << violations
    << " violations, max K " << num(worst_k);
  o.detail = s.str();
  return o;
}

Outcome equilibrium_oracle() {
  const int ns[4] = {2, 5, 10, 20};
  Rng rng(300);
  int models = 0, mismatches = 0, cert_excess = 0, bound_excess = 0;
  double worst_gap = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = ns[i % 4];
    RnnConfig cfg;
    cfg.n = n;
    cfg.m = 4;
    cfg.init_scale = rng.uniform(0.1, 2.5) / (n + 1);
    const RnnWeights w = RnnWeights::random(cfg, rng);
    ++models;

    const EquilibriumReport eq = find_equilibria(w);
    if (eq.has_marginal_segment) {
      ++mismatches;
      continue;
    }

    // Fixed-point scan of the zero-input map on a 1e-4 grid.
    const Eigen::VectorXd u0 = Eigen::VectorXd::Zero(4);
    const auto g = [&](double x) { return rnn_forward(w, x, u0) - x; };
    std::vector<double> grid_roots;
    const int kGridN = 10000;
    const double h = 1.0 / kGridN;
    double gp = g(0.0);
    if (gp == 0.0) grid_roots.push_back(0.0);
    for (int k = 1; k <= kGridN; ++k) {
      const double x = static_cast<double>(k) * h;
      const double gc = g(x);
      if (gc == 0.0)
        grid_roots.push_back(x);
      else if (gp != 0.0 && std::signbit(gp) != std::signbit(gc))
        grid_roots.push_back(x - h + h * gp / (gp - gc));
      gp = gc;
    }

    std::vector<double> closed;
    for (const auto& e : eq.equilibria) closed.push_back(e.x);
    std::sort(closed.begin(), closed.end());

    if (closed.size() != grid_roots.size()) {
      ++mismatches;
    } else {
      for (std::size_t k = 0; k < closed.size(); ++k) {
        const double gap = std::abs(closed[k] - grid_roots[k]);
        worst_gap = std::max(worst_gap, gap);
        if (gap > 1e-3) ++mismatches;
      }
    }

    if (certify(w).theorem3_ok && eq.equilibria.size() > 1) ++cert_excess;
    if (eq.equilibria.size() > static_cast<std::size_t>(n) + 1) ++bound_excess;
  }
  Outcome o;
  o.ok = mismatches == 0 && cert_excess == 0 && bound_excess == 0;
  std::ostringstream s;
  s << models << " models, " << mismatches << " oracle mismatches, max gap "
    << num(worst_gap) << ", " << cert_excess << " certified multi-equilibrium";
  o.detail = s.str();
  return o;
}

Outcome gradient_check() {
  const int n = 6, m = 4;
  const double eta = 200.0, fd_h = 1e-6;
  Rng rng(400);
  int accepted = 0, attempts = 0, failures = 0;
  double worst_rel = 0.0;

  while (accepted < 100 && attempts < 20000) {
    ++attempts;
    RnnConfig cfg;
    cfg.n = n;
    cfg.m = m;
    cfg.init_scale = rng.uniform(0.3, 1.5) / (n + 1);
    RnnWeights w = RnnWeights::random(cfg, rng);
    const double x = rng.uniform(0.0, 1.0);
    Eigen::VectorXd u(m);
    for (int j = 0; j < m; ++j) u[j] = rng.uniform(-1.0, 1.0);
    const double x_meas = rng.uniform(0.0, 1.0);

    // Stay away from every non-smooth point: relu kinks, the penalty
    // indicator threshold and the |.| kinks inside the penalty terms.
    bool valid = true;
    const double lam = 1.0 / (n + 1);
    for (int i = 0; i < n; ++i) {
      const double z = w.w1[i] * x + w.W2.row(i).dot(u) + w.b[i];
      if (std::abs(z) <= 1e-3) valid = false;
      if (std::abs(std::abs(w.a[i]) + std::abs(w.w1[i]) * lam - lam) <= 1e-4) valid = false;
      if (std::abs(w.a[i]) <= 1e-3 || std::abs(w.w1[i]) <= 1e-3) valid = false;
    }
    if (!valid) continue;
    ++accepted;

    const RnnTensors analytic = rnn_backprop(w, x, u, x_meas, eta);
    const auto loss_at = [&](const RnnWeights& ww) {
      return rnn_loss(ww, rnn_forward(ww, x, u), x_meas, eta);
    };
    const auto check_coord = [&](double* coord, double grad) {
      const double saved = *coord;
      *coord = saved + fd_h;
      const double up = loss_at(w);
      *coord = saved - fd_h;
      const double dn = loss_at(w);
      *coord = saved;
      const double fd = (up - dn) / (2.0 * fd_h);
      const double rel = std::abs(grad - fd) / std::max(1.0, std::abs(fd));
      worst_rel = std::max(worst_rel, rel);
      if (rel > 1e-5) ++failures;
    };
    for (int i = 0; i < n; ++i) check_coord(&w.a[i], analytic.a[i]);
    for (int i = 0; i < n; ++i) check_coord(&w.w1[i], analytic.w1[i]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) check_coord(&w.W2(i, j), analytic.W2(i, j));
    for (int i = 0; i < n; ++i) check_coord(&w.b[i], analytic.b[i]);
  }

  Outcome o;
  o.ok = accepted == 100 && failures == 0;
  std::ostringstream s;
  s << accepted << " points x " << (n * (m + 2) + n) << " coords, max rel err "
    << num(worst_rel);
  o.detail = s.str();
  return o;
}

Outcome rls_batch_equivalence() {
  const double p0 = 1e3;
  int datasets = 0, failures = 0;
  double worst_rel = 0.0;
  for (double lambda : {1.0, 0.99}) {
    for (int d = 0; d < 20; ++d) {
      ++datasets;
      Rng rng(500 + static_cast<std::uint64_t>(d) + (lambda == 1.0 ? 0 : 1000));
      Eigen::VectorXd zeta_true(kRlsParamCount);
      for (int i = 0; i < kRlsParamCount; ++i) zeta_true[i] = rng.uniform(-2.0, 2.0);

      const int N = 500;
      RecursiveLeastSquares rec(kRlsParamCount, lambda, p0);
      std::vector<Eigen::VectorXd> phis;
      std::vector<double> ys;
      for (int k = 0; k < N; ++k) {
        const Eigen::VectorXd phi =
            rls_regressor(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0),
                          rng.uniform(-M_PI, M_PI), rng.uniform(-1.0, 1.0));
        const double y = phi.dot(zeta_true) + 0.05 * rng.normal();
        rec.update(phi, y);
        phis.push_back(phi);
        ys.push_back(y);
      }

      // Exponentially weighted batch solution with the same diffuse prior.
      Eigen::MatrixXd A = std::pow(lambda, N) / p0 *
                          Eigen::MatrixXd::Identity(kRlsParamCount, kRlsParamCount);
      Eigen::VectorXd b = Eigen::VectorXd::Zero(kRlsParamCount);
      for (int k = 0; k < N; ++k) {
        const double wgt = std::pow(lambda, N - 1 - k);
        A += wgt * phis[k] * phis[k].transpose();
        b += wgt * phis[k] * ys[k];
      }
      const Eigen::VectorXd zeta_batch = A.ldlt().solve(b);

      const double rel = (rec.zeta() - zeta_batch).norm() / zeta_batch.norm();
      worst_rel = std::max(worst_rel, rel);
      if (rel > 1e-6) ++failures;
    }
  }
  Outcome o;
  o.ok = failures == 0;
  std::ostringstream s;
  s << datasets << " datasets (forgetting 1.0 and 0.99), max rel diff " << num(worst_rel);
  o.detail = s.str();
  return o;
}

Outcome aid_parameter_recovery() {
  const SurgeParams truth = nominal_truth();
  const double v_max = 2.5, dt = 0.1;
  const MissionScript script = make_pe_mission(600.0, 1.0);

  AidConfig cfg;
  cfg.mass = truth.m;
  AidEstimator est(cfg);

  AidVector theta_true;
  theta_true << truth.c_q, truth.c_l, truth.c_thetadot, truth.thrust_left.alpha,
      truth.thrust_left.beta, truth.thrust_left.gamma, truth.thrust_right.alpha,
      truth.thrust_right.beta, truth.thrust_right.gamma;

  double v = 0.0, abs_sum = 0.0;
  const long samples = 6000;
  for (long k = 0; k < samples; ++k) {
    const auto s = script.sample(static_cast<double>(k) * dt);
    MeasurementFrame f;
    f.t = static_cast<double>(k) * dt;
    f.v_meas = v;
    f.thetadot = s.heading_rate;
    f.xi_l = s.xi_l;
    f.xi_r = s.xi_r;
    const double pred = est.update(f, dt);
    abs_sum += std::abs(pred - v);
    v = step(truth, v, s.heading_rate, s.xi_l, s.xi_r, dt, v_max);
  }

  const double mae = abs_sum / static_cast<double>(samples);
  double worst_rel = 0.0;
  for (int i = 0; i < kAidParamCount; ++i)
    worst_rel = std::max(worst_rel,
                         std::abs(est.theta_hat()[i] - theta_true[i]) / std::abs(theta_true[i]));

  Outcome o;
  o.ok = mae < 5e-3 && worst_rel < 0.10;
  std::ostringstream s;
  s << "prediction MAE " << num(mae) << " (< 0.005), worst parameter error "
    << num(100.0 * worst_rel) << "% (< 10%)";
  o.detail = s.str();
  return o;
}

Outcome time_step_contraction_bound() {
  Rng rng(700);
  const double v_max = 2.5, xi_max = 1.0;
  int params = 0, failures = 0;
  double worst_ratio = 0.0;
  for (int d = 0; d < 20; ++d) {
    SurgeParams p;
    p.m = rng.uniform(10.0, 80.0);
    p.c_q = -rng.uniform(1.0, 10.0);
    p.c_l = -rng.uniform(0.2, 5.0);
    p.c_thetadot = -rng.uniform(0.1, 3.0);
    p.thrust_left = {rng.uniform(1.0, 8.0), rng.uniform(2.0, 15.0), -rng.uniform(0.2, 2.0)};
    p.thrust_right = {rng.uniform(1.0, 8.0), rng.uniform(2.0, 15.0), -rng.uniform(0.2, 2.0)};
    ++params;

    const double bound = contraction_dt_bound(p, v_max, xi_max);
    if (!std::isfinite(bound)) {
      ++failures;
      continue;
    }

    // Below the bound: the map contracts everywhere we can sample it.
    const double dt_ok = 0.9 * bound;
    double max_ratio = 0.0;
    for (int k = 0; k < 2000; ++k) {
      const double v1 = rng.uniform(0.0, v_max), v2 = rng.uniform(0.0, v_max);
      if (v1 == v2) continue;
      const double td = rng.uniform(-1.0, 1.0);
      const double xl = rng.uniform(0.0, xi_max), xr = rng.uniform(0.0, xi_max);
      const double f1 = step(p, v1, td, xl, xr, dt_ok, v_max);
      const double f2 = step(p, v2, td, xl, xr, dt_ok, v_max);
      max_ratio = std::max(max_ratio, std::abs(f1 - f2) / std::abs(v1 - v2));
    }
    worst_ratio = std::max(worst_ratio, max_ratio);
    if (!(max_ratio < 1.0)) ++failures;

    // Beyond the bound: the guarantee condition fails and the worst-case
    // state-derivative of the unclamped map leaves the unit interval.
    const double dt_bad = 1.5 * bound;
    if (!(dt_bad > bound)) ++failures;
    const double denom = 2.0 * v_max * p.c_q + p.c_l + p.c_thetadot +
                         (p.thrust_left.gamma + p.thrust_right.gamma) * xi_max;
    const double worst_slope = 1.0 + dt_bad * denom / p.m;
    if (!(std::abs(worst_slope) > 1.0)) ++failures;
  }
  Outcome o;
  o.ok = failures == 0;
  std::ostringstream s;
  s << params << " parameter sets, max sampled ratio at 0.9x bound " << num(worst_ratio);
  o.detail = s.str();
  return o;
}

Outcome quantization_error_floor() {
  VehicleSpec spec;
  spec.truth = nominal_truth();
  spec.seed = 8;
  const MissionLog log = simulate(spec, make_pe_mission(600.0, spec.xi_max), "run01");

  FrameGate gate(FrameGateConfig{0.2, 0.05});
  double last_raw = 0.0, abs_sum = 0.0;
  long frames = 0;
  for (const auto& msg : log.messages) {
    if (msg.channel == Channel::velocity) last_raw = msg.value;
    if (auto frame = gate.push(msg); frame && frame->v_meas) {
      // A perfect predictor outputs the true velocity; the only error left
      // is the measurement's quantization.
      abs_sum += std::abs(*frame->v_meas - last_raw);
      ++frames;
    }
  }
  const double mae = frames ? abs_sum / static_cast<double>(frames) : 0.0;
  Outcome o;
  o.ok = frames > 1000 && mae >= 0.010 && mae <= 0.015;
  std::ostringstream s;
  s << frames << " frames, perfect-predictor MAE " << num(mae) << " (in [0.010, 0.015])";
  o.detail = s.str();
  return o;
}

// Shared fleet training used by the ensemble and cross-vehicle criteria.

MissionLog fleet_mission(const VehicleSpec& spec, double duration, std::uint64_t salt,
                         const std::string& run_id) {
  Rng script_rng = Rng(spec.seed).fork(salt);
  const MissionScript script = make_training_mission(duration, spec.xi_max, script_rng);
  VehicleSpec s = spec;
  s.seed = Rng::splitmix(spec.seed ^ (salt * 0x9e3779b97f4a7c15ull));
  return simulate(s, script, run_id);
}

EngineConfig engine_config_for(const VehicleSpec& spec, std::uint64_t seed_salt) {
  EngineConfig cfg;
  cfg.vehicle_id = spec.vehicle_id;
  cfg.v_max = spec.v_max;
  cfg.xi_max = spec.xi_max;
  cfg.aid.mass = spec.truth.m;
  cfg.seed = Rng::splitmix(0xc0ffee ^ seed_salt);
  cfg.snapshot_period = 0.0;
  return cfg;
}

SnapshotData train_on(const VehicleSpec& spec, double duration, std::uint64_t salt) {
  StreamEngine engine(engine_config_for(spec, salt));
  const MissionLog log = fleet_mission(spec, duration, 1000 + salt, "train");
  for (const auto& m : log.messages) engine.push(m);
  return engine.snapshot();
}

Outcome ensemble_dominance() {
  NoiseModel noise{0.02, 0.002, 0.5};
  const auto fleet = make_fleet(4, 900, 0.3, noise);

  EngineConfig cfg = engine_config_for(fleet[0], 0);  // dims only; AID cfg comes from snapshots
  int batch_failures = 0;
  std::array<std::vector<double>, kMethodCount> mae_pool;
  double worst_batch_excess = 0.0;

  for (std::size_t i = 0; i < fleet.size(); ++i) {
    const SnapshotData snap = train_on(fleet[i], 600.0, i + 1);
    std::vector<MissionLog> logs = {fleet_mission(fleet[i], 300.0, 2000 + i, "val01"),
                                    fleet_mission(fleet[i], 300.0, 2100 + i, "val02")};

    // Batch optimality on the first replay's fitted data.
    StreamEngine replay(cfg, replay_start(snap), StreamEngine::LearnMode::frozen);
    std::vector<PredictionRecord> recs;
    for (const auto& m : logs[0].messages)
      if (auto r = replay.push(m)) recs.push_back(*r);
    long rows = 0;
    for (const auto& r : recs)
      if (r.v_meas) ++rows;
    Eigen::MatrixX3d H(rows, 3);
    Eigen::VectorXd y(rows);
    long r2 = 0;
    for (const auto& r : recs) {
      if (!r.v_meas) continue;
      H(r2, 0) = r.v_aid;
      H(r2, 1) = r.v_rnn;
      H(r2, 2) = r.v_rls;
      y(r2) = *r.v_meas;
      ++r2;
    }
    const Eigen::Vector3d w = ensemble_batch_weights(H, y);
    const double fused_mse = (H * w - y).squaredNorm() / static_cast<double>(rows);
    double min_comp = std::numeric_limits<double>::infinity();
    for (int c = 0; c < 3; ++c)
      min_comp = std::min(min_comp, (H.col(c) - y).squaredNorm() / static_cast<double>(rows));
    worst_batch_excess = std::max(worst_batch_excess, fused_mse - min_comp);
    if (fused_mse > min_comp * (1.0 + 1e-10) + 1e-15) ++batch_failures;

    // Online frozen cross-validation pool.
    const auto pairs = cross_validate(cfg, {snap}, logs);
    for (const auto& p : pairs)
      for (int m = 0; m < kMethodCount; ++m) mae_pool[m].push_back(p.mae[m]);
  }

  const double we_median =
      summarize_distribution(mae_pool[static_cast<int>(Method::we)]).median;
  double best_single = std::numeric_limits<double>::infinity();
  for (Method m : {Method::aid, Method::rnn, Method::rls})
    best_single = std::min(best_single,
                           summarize_distribution(mae_pool[static_cast<int>(m)]).median);

  Outcome o;
  o.ok = batch_failures == 0 && we_median <= best_single;
  std::ostringstream s;
  s << "batch fused-minus-best " << num(worst_batch_excess) << ", online median MAE fused "
    << num(we_median) << " vs best single " << num(best_single);
  o.detail = s.str();
  return o;
}

Outcome cross_vehicle_specificity() {
  const auto fleet = make_fleet(8, 1000, 0.3, NoiseModel{0.02, 0.002, 0.5});
  const EngineConfig cfg = engine_config_for(fleet[0], 0);

  std::vector<std::string> ids;
  std::map<std::string, std::vector<SnapshotData>> snaps;
  std::map<std::string, std::vector<MissionLog>> logs;
  for (std::size_t i = 0; i < fleet.size(); ++i) {
    ids.push_back(fleet[i].vehicle_id);
    snaps[fleet[i].vehicle_id] = {train_on(fleet[i], 1800.0, 10 + i)};
    logs[fleet[i].vehicle_id] = {fleet_mission(fleet[i], 600.0, 3000 + i, "val01")};
  }

  const auto res = cross_vehicle_matrix(cfg, ids, snaps, logs);
  int violations = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      if (i == j) continue;
      min_margin = std::min(min_margin, res.mse(i, j) / res.mse(i, i));
      if (!(res.mse(i, i) < res.mse(i, j))) ++violations;
    }
  }
  Outcome o;
  o.ok = violations == 0;
  std::ostringstream s;
  s << "8x8 matrix, " << violations << " row-dominance violations, min off/diag ratio "
    << num(min_margin);
  o.detail = s.str();
  return o;
}

Outcome persistence_continuity() {
  VehicleSpec spec;
  spec.truth = nominal_truth();
  spec.noise = {0.05, 0.002, 0.5};
  spec.seed = 11;
  Rng script_rng(1100);
  const MissionScript script = make_training_mission(120.0, spec.xi_max, script_rng);
  const MissionLog log = simulate(spec, script, "run01");

  EngineConfig cfg = engine_config_for(spec, 42);

  StreamEngine whole(cfg);
  for (const auto& m : log.messages) whole.push(m);

  StreamEngine first(cfg);
  const std::size_t cut = log.messages.size() / 2;
  for (std::size_t i = 0; i < cut; ++i) first.push(log.messages[i]);
  StreamEngine second(cfg, first.snapshot());
  for (std::size_t i = cut; i < log.messages.size(); ++i) second.push(log.messages[i]);

  int metric_diffs = 0;
  for (int m = 0; m < kMethodCount; ++m) {
    const auto& a = whole.metrics().stats(static_cast<Method>(m));
    const auto& b = second.metrics().stats(static_cast<Method>(m));
    if (a.count != b.count || a.abs_sum != b.abs_sum || a.sq_sum != b.sq_sum) ++metric_diffs;
  }

  const std::string text = serialize_snapshot(whole.snapshot());
  const bool roundtrip_exact = serialize_snapshot(parse_snapshot(text)) == text;

  Outcome o;
  o.ok = metric_diffs == 0 && roundtrip_exact;
  std::ostringstream s;
  s << "split vs unsplit metrics identical for " << (kMethodCount - metric_diffs) << "/"
    << kMethodCount << " methods, snapshot round-trip "
    << (roundtrip_exact ? "bit-exact" : "NOT bit-exact");
  o.detail = s.str();
  return o;
}

Outcome certified_online_training() {
  VehicleSpec spec;
  spec.truth = nominal_truth();
  spec.noise = {0.05, 0.002, 0.5};
  spec.seed = 12;
  Rng script_rng(1200);
  const MissionScript script = make_training_mission(1800.0, spec.xi_max, script_rng);
  const MissionLog log = simulate(spec, script, "run01");

  EngineConfig cfg = engine_config_for(spec, 1);
  cfg.snapshot_period = 180.0;
  StreamEngine engine(cfg);
  const fs::path dir = fs::temp_directory_path() / "surgeid_acceptance_snapshots";
  fs::remove_all(dir);
  engine.set_snapshot_dir(dir);

  std::vector<PredictionRecord> recs;
  for (const auto& m : log.messages)
    if (auto r = engine.push(m)) recs.push_back(*r);
  engine.finalize();

  int snapshots = 0, uncertified = 0;
  for (const auto& path : engine.written_snapshots()) {
    ++snapshots;
    const SnapshotData snap = load_snapshot(path);
    const CertificationReport cert = certify(snap.rnn_weights);
    if (!snap.certification.theorem3_ok || !cert.theorem3_ok) ++uncertified;
  }
  fs::remove_all(dir);

  double abs_sum = 0.0;
  long scored = 0;
  for (const auto& r : recs) {
    if (r.t < 1500.0 || !r.v_meas) continue;
    abs_sum += std::abs(*r.v_meas - r.v_rnn);
    ++scored;
  }
  const double final_mae = scored ? abs_sum / static_cast<double>(scored) : 1e9;
  const double limit = 2.0 * spec.noise.velocity_std;

  Outcome o;
  o.ok = snapshots >= 10 && uncertified == 0 && final_mae < limit;
  std::ostringstream s;
  s << snapshots << " snapshots, " << uncertified << " uncertified, final one-step MAE "
    << num(final_mae) << " (< " << num(limit) << ")";
  o.detail = s.str();
  return o;
}

struct Criterion {
  const char* name;
  double time_limit_s;
  std::function<Outcome()> fn;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"certificate-implication-chain", 10.0, certificate_implication_chain},
      {"empirical-contraction", 30.0, empirical_contraction},
      {"equilibrium-oracle", 30.0, equilibrium_oracle},
      {"gradient-check", 5.0, gradient_check},
      {"rls-batch-equivalence", 10.0, rls_batch_equivalence},
      {"aid-parameter-recovery", 20.0, aid_parameter_recovery},
      {"time-step-contraction-bound", 10.0, time_step_contraction_bound},
      {"quantization-error-floor", 10.0, quantization_error_floor},
      {"ensemble-dominance", 60.0, ensemble_dominance},
      {"cross-vehicle-specificity", 300.0, cross_vehicle_specificity},
      {"persistence-continuity", 10.0, persistence_continuity},
      {"certified-online-training", 60.0, certified_online_training},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      out = c.fn();
    } catch (const std::exception& e) {
      out.ok = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = elapsed < c.time_limit_s;
    const bool pass = out.ok && in_time;
    if (!pass) ++failures;
    std::printf("[%2zu/12] %s  %-30s  %s  (%.2f s / %.0f s)%s\n", i + 1,
                pass ? "PASS" : "FAIL", c.name, out.detail.c_str(), elapsed,
                c.time_limit_s, in_time ? "" : "  [over time limit]");
    std::fflush(stdout);
  }
  if (failures == 0)
    std::printf("all 12 acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures;
}
