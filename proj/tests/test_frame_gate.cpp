#include <cmath>

#include "doctest.h"
#include "surgeid/frame_gate.hpp"

using namespace surgeid;

namespace {

Message msg(double t, Channel c, double v) { return Message{t, c, v}; }

// Feeds one complete sample (heading + both commands + optional velocity).
std::optional<MeasurementFrame> feed_sample(FrameGate& gate, double t, double heading,
                                            double xi_l, double xi_r,
                                            std::optional<double> vel = std::nullopt) {
  std::optional<MeasurementFrame> out;
  if (vel) out = gate.push(msg(t, Channel::velocity, *vel));
  auto r = gate.push(msg(t, Channel::heading, heading));
  if (r) out = r;
  r = gate.push(msg(t, Channel::thrust_left, xi_l));
  if (r) out = r;
  r = gate.push(msg(t, Channel::thrust_right, xi_r));
  if (r) out = r;
  return out;
}

}  // namespace

TEST_CASE("quantize: nearest multiple of the step") {
  CHECK(quantize_velocity(0.237) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(quantize_velocity(0.22) == doctest::Approx(0.20).epsilon(1e-15));
  CHECK(quantize_velocity(0.0) == 0.0);
}

TEST_CASE("quantize: ties round away from zero") {
  CHECK(quantize_velocity(0.125) == doctest::Approx(0.15).epsilon(1e-15));
  CHECK(quantize_velocity(-0.125) == doctest::Approx(-0.15).epsilon(1e-15));
  CHECK(quantize_velocity(0.075) == doctest::Approx(0.10).epsilon(1e-15));
}

TEST_CASE("quantize: representation error near a tie is snapped first") {
  // 0.35/0.05 evaluates below 7 in floating point; the ratio snap keeps the
  // result on the grid point instead of dropping to 0.30.
  CHECK(quantize_velocity(0.35) == doctest::Approx(0.35).epsilon(1e-15));
  CHECK(quantize_velocity(2.45) == doctest::Approx(2.45).epsilon(1e-15));
}

TEST_CASE("wrap: angles map into (-pi, pi]") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(4.0 * M_PI + 0.3) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(3.0) == doctest::Approx(3.0));
  CHECK(wrap_angle(-3.0) == doctest::Approx(-3.0));
}

TEST_CASE("gate: frame forms once heading and both commands are fresh") {
  FrameGate gate{FrameGateConfig{}};
  CHECK(!gate.push(msg(0.00, Channel::heading, 0.5)));
  CHECK(!gate.push(msg(0.05, Channel::thrust_left, 0.3)));
  auto f = gate.push(msg(0.10, Channel::thrust_right, 0.4));
  REQUIRE(f);
  CHECK(f->t == 0.10);  // newest member stamps the frame
  CHECK(f->theta == 0.5);
  CHECK(f->xi_l == 0.3);
  CHECK(f->xi_r == 0.4);
  CHECK(!f->v_meas);     // no velocity arrived
  CHECK(f->thetadot == 0.0);  // first frame has no heading history
}

TEST_CASE("gate: consumed messages are not reused for the next frame") {
  FrameGate gate{FrameGateConfig{}};
  REQUIRE(feed_sample(gate, 0.0, 0.1, 0.2, 0.3));
  // Only two of the three required channels refresh: no frame.
  CHECK(!gate.push(msg(0.1, Channel::heading, 0.15)));
  CHECK(!gate.push(msg(0.1, Channel::thrust_left, 0.25)));
  // The third completes a fresh set.
  CHECK(gate.push(msg(0.1, Channel::thrust_right, 0.35)));
}

TEST_CASE("gate: stale companions block emission until the window is met") {
  FrameGate gate{FrameGateConfig{0.2, 0.05}};
  CHECK(!gate.push(msg(0.0, Channel::heading, 0.1)));
  CHECK(!gate.push(msg(0.0, Channel::thrust_left, 0.2)));
  // 0.5 s later: the other channels are stale, spread 0.5 > 0.2.
  CHECK(!gate.push(msg(0.5, Channel::thrust_right, 0.3)));
  // Refreshing the stale two completes a coherent set.
  CHECK(!gate.push(msg(0.55, Channel::heading, 0.12)));
  auto f = gate.push(msg(0.6, Channel::thrust_left, 0.22));
  REQUIRE(f);
  CHECK(f->t == 0.6);
}

TEST_CASE("gate: velocity joins only when fresh, and is quantized") {
  FrameGate gate{FrameGateConfig{0.2, 0.05}};
  auto f = feed_sample(gate, 0.0, 0.0, 0.1, 0.1, 0.237);
  REQUIRE(f);
  REQUIRE(f->v_meas);
  CHECK(*f->v_meas == doctest::Approx(0.25).epsilon(1e-12));

  // A velocity older than the window rides no frame.
  CHECK(!gate.push(msg(1.0, Channel::velocity, 0.5)));
  auto g = feed_sample(gate, 1.5, 0.0, 0.1, 0.1);
  REQUIRE(g);
  CHECK(!g->v_meas);
}

TEST_CASE("gate: quantization can be disabled") {
  FrameGate gate{FrameGateConfig{0.2, 0.0}};
  auto f = feed_sample(gate, 0.0, 0.0, 0.1, 0.1, 0.237);
  REQUIRE(f);
  REQUIRE(f->v_meas);
  CHECK(*f->v_meas == 0.237);
}

TEST_CASE("gate: heading rate is first-differenced between frames") {
  FrameGate gate{FrameGateConfig{}};
  auto f0 = feed_sample(gate, 0.0, 0.10, 0.1, 0.1);
  REQUIRE(f0);
  CHECK(f0->thetadot == 0.0);
  auto f1 = feed_sample(gate, 0.1, 0.14, 0.1, 0.1);
  REQUIRE(f1);
  CHECK(f1->thetadot == doctest::Approx(0.4).epsilon(1e-9));
}

TEST_CASE("gate: heading difference wraps across the branch cut") {
  FrameGate gate{FrameGateConfig{}};
  REQUIRE(feed_sample(gate, 0.0, M_PI - 0.05, 0.1, 0.1));
  auto f = feed_sample(gate, 0.1, -M_PI + 0.05, 0.1, 0.1);
  REQUIRE(f);
  CHECK(f->thetadot == doctest::Approx(1.0).epsilon(1e-9));  // +0.1 rad over 0.1 s
}

TEST_CASE("gate: explicit heading-rate message overrides the difference") {
  FrameGate gate{FrameGateConfig{}};
  REQUIRE(feed_sample(gate, 0.0, 0.0, 0.1, 0.1));
  gate.push(msg(0.1, Channel::heading_rate, -0.7));
  auto f = feed_sample(gate, 0.1, 0.05, 0.1, 0.1);
  REQUIRE(f);
  CHECK(f->thetadot == doctest::Approx(-0.7).epsilon(1e-12));
  // Once consumed, the next frame falls back to differencing.
  auto g = feed_sample(gate, 0.2, 0.10, 0.1, 0.1);
  REQUIRE(g);
  CHECK(g->thetadot == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("gate: non-finite and time-regressing messages are dropped") {
  FrameGate gate{FrameGateConfig{}};
  gate.push(msg(1.0, Channel::heading, 0.2));
  CHECK(gate.push(msg(1.0, Channel::velocity, std::nan(""))) == std::nullopt);
  gate.push(msg(1.0, Channel::thrust_left, 0.1));
  // An older message on a channel with newer history is dropped.
  CHECK(gate.push(msg(0.5, Channel::thrust_left, 0.9)) == std::nullopt);
  CHECK(gate.skipped_messages() == 2);
  auto f = gate.push(msg(1.0, Channel::thrust_right, 0.3));
  REQUIRE(f);
  CHECK(f->xi_l == 0.1);  // the stale value never landed
}

TEST_CASE("gate: state survives a save/restore round trip") {
  FrameGate a{FrameGateConfig{}};
  feed_sample(a, 0.0, 0.3, 0.1, 0.2);
  a.push(msg(0.1, Channel::heading, 0.35));

  FrameGate b{FrameGateConfig{}};
  b.set_state(a.state());
  // Completing the pending frame in either gate gives identical results.
  auto fa = [&] {
    FrameGate g = a;
    g.push(msg(0.1, Channel::thrust_left, 0.15));
    return g.push(msg(0.1, Channel::thrust_right, 0.25));
  }();
  auto fb = [&] {
    b.push(msg(0.1, Channel::thrust_left, 0.15));
    return b.push(msg(0.1, Channel::thrust_right, 0.25));
  }();
  REQUIRE(fa);
  REQUIRE(fb);
  CHECK(fa->t == fb->t);
  CHECK(fa->theta == fb->theta);
  CHECK(fa->thetadot == fb->thetadot);
}
