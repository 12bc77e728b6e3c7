#pragma once

#include <vector>

namespace surgeid {

class Rng;

enum class SegmentKind { multisine, step, ramp, idle, blackout };

struct SineComponent {
  double amp{0.0};
  double freq_hz{0.0};
  double phase{0.0};
};

// One timed maneuver. step holds (xi_l0, xi_r0); ramp interpolates
// (xi_l0, xi_r0) -> (xi_l1, xi_r1); multisine is offset plus a sum of sines
// per thruster; idle is zero thrust; blackout suppresses all telemetry while
// the vehicle keeps moving under (xi_l0, xi_r0).
struct MissionSegment {
  SegmentKind kind{SegmentKind::idle};
  double duration{0.0};      // s
  double heading_rate{0.0};  // rad/s, constant over the segment

  double xi_l0{0.0}, xi_r0{0.0};
  double xi_l1{0.0}, xi_r1{0.0};
  double offset_l{0.0}, offset_r{0.0};
  std::vector<SineComponent> sines_l, sines_r;

  // Commands at segment-local time tau.
  double command_left(double tau) const;
  double command_right(double tau) const;
  // Worst-case command bounds must stay inside [0, xi_max].
  void validate(double xi_max) const;
};

struct MissionScript {
  double message_period{0.1};  // s between telemetry samples
  std::vector<MissionSegment> segments;

  double duration() const;
  void validate(double xi_max) const;

  struct Sample {
    double xi_l{0.0};
    double xi_r{0.0};
    double heading_rate{0.0};
    bool blackout{false};
  };
  Sample sample(double t) const;
};

// Persistently exciting program: multisine phases interleaved with
// zero-thrust coasts and single-thruster sweeps at varying heading rates,
// so every regressor channel (drag block and both thruster maps) carries
// independent information along the closed-loop trajectory.
MissionScript make_pe_mission(double duration, double xi_max,
                              double message_period = 0.1);

// Mixed operational profile cycling through multisine, step, ramp, idle and
// blackout segments with randomized levels.
MissionScript make_training_mission(double duration, double xi_max, Rng& rng,
                                    double message_period = 0.1);

}  // namespace surgeid
