#include <benchmark/benchmark.h>

#include "surgeid/aid.hpp"
#include "surgeid/mission.hpp"
#include "surgeid/rls.hpp"
#include "surgeid/rng.hpp"
#include "surgeid/rnn.hpp"
#include "surgeid/rnn_analysis.hpp"
#include "surgeid/simulate.hpp"
#include "surgeid/stream_engine.hpp"

using namespace surgeid;

namespace {

RnnWeights make_weights(int n) {
  RnnConfig cfg;
  cfg.n = n;
  Rng rng(7);
  return RnnWeights::random(cfg, rng);
}

void BM_RnnForward(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const RnnWeights w = make_weights(n);
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(4, 0.3);
  double x = 0.2;
  for (auto _ : state) {
    x = rnn_forward(w, x, u);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_RnnForward)->Arg(5)->Arg(20)->Arg(50);

void BM_RnnLearnStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  RnnConfig cfg;
  cfg.n = n;
  Rng rng(7);
  RnnEstimator est(cfg, rng);
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(4, 0.3);
  double meas = 0.21;
  for (auto _ : state) {
    benchmark::DoNotOptimize(est.predict_and_learn(u, meas));
    meas = 0.2 + 0.01 * (meas < 0.2);
  }
}
BENCHMARK(BM_RnnLearnStep)->Arg(5)->Arg(20)->Arg(50);

void BM_Certify(benchmark::State& state) {
  const RnnWeights w = make_weights(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(certify(w));
}
BENCHMARK(BM_Certify)->Arg(20)->Arg(50);

void BM_FindEquilibria(benchmark::State& state) {
  const RnnWeights w = make_weights(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(find_equilibria(w));
}
BENCHMARK(BM_FindEquilibria)->Arg(20)->Arg(50);

void BM_AidUpdate(benchmark::State& state) {
  AidEstimator est(AidConfig{});
  MeasurementFrame f;
  f.t = 0.0;
  f.v_meas = 0.8;
  f.thetadot = 0.1;
  f.xi_l = 0.5;
  f.xi_r = 0.6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(est.update(f, 0.1));
    f.t += 0.1;
  }
}
BENCHMARK(BM_AidUpdate);

void BM_RlsUpdate(benchmark::State& state) {
  RecursiveLeastSquares rls(kRlsParamCount, 0.995, 1e3);
  Rng rng(3);
  const Eigen::VectorXd phi = rls_regressor(0.4, 0.6, 0.3, 0.05);
  double y = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rls.update(phi, y));
    y += 1e-6;
  }
}
BENCHMARK(BM_RlsUpdate);

void BM_EngineTick(benchmark::State& state) {
  EngineConfig cfg;
  cfg.snapshot_period = 0.0;
  StreamEngine engine(cfg);
  MeasurementFrame f;
  f.v_meas = 0.8;
  f.theta = 0.2;
  f.thetadot = 0.05;
  f.xi_l = 0.5;
  f.xi_r = 0.6;
  double t = 0.0;
  for (auto _ : state) {
    f.t = t;
    t += 0.1;
    benchmark::DoNotOptimize(engine.tick(f));
  }
}
BENCHMARK(BM_EngineTick);

void BM_Simulate(benchmark::State& state) {
  VehicleSpec spec;
  spec.truth = nominal_truth();
  spec.noise = {0.02, 0.002, 0.5};
  const MissionScript script = make_pe_mission(60.0, spec.xi_max);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(spec, script, "run"));
}
BENCHMARK(BM_Simulate);

}  // namespace

BENCHMARK_MAIN();
