#pragma once

#include <array>
#include <optional>

#include "surgeid/messages.hpp"

namespace surgeid {

// Nearest multiple of `step`, ties away from zero. The ratio is snapped to
// nine decimals first so values like 0.125 that are not exactly representable
// still land on the tie.
double quantize_velocity(double v, double step = 0.05);

// Wrap to (-pi, pi].
double wrap_angle(double a);

struct FrameGateConfig {
  double window{0.2};             // s, max timestamp spread inside a frame
  double quantization_step{0.05}; // m/s; <= 0 disables quantization

  void validate() const;
};

// Assembles asynchronous single-channel messages into complete input frames.
// A frame is emitted once heading and both thruster commands each have a
// message not yet used by a previous frame, all within the staleness window
// of each other. A velocity measurement rides along only if it is equally
// fresh and unused; otherwise the frame is prediction-only.
//
// Heading rate comes from first-differencing the heading values of emitted
// frames (with wraparound), unless a fresh heading_rate message overrides it.
class FrameGate {
 public:
  struct Slot {
    bool has{false};
    double t{0.0};
    double value{0.0};
    bool consumed{true};
  };

  struct State {
    std::array<Slot, kChannelCount> slots{};
    bool has_prev_heading{false};
    double prev_heading_t{0.0};
    double prev_heading{0.0};
  };

  explicit FrameGate(const FrameGateConfig& cfg);

  // Ingests one message; returns a frame when this message completes a set.
  std::optional<MeasurementFrame> push(const Message& msg);

  const State& state() const { return state_; }
  void set_state(const State& s) { state_ = s; }
  const FrameGateConfig& config() const { return cfg_; }
  long skipped_messages() const { return skipped_; }
  void set_skipped_messages(long n) { skipped_ = n; }

 private:
  FrameGateConfig cfg_;
  State state_;
  long skipped_{0};
};

}  // namespace surgeid
