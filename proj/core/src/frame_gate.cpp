#include "surgeid/frame_gate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace surgeid {

double quantize_velocity(double v, double step) {
  if (step <= 0.0 || !std::isfinite(v)) return v;
  double r = v / step;
  r = std::round(r * 1e9) / 1e9;
  return step * std::round(r);  // std::round ties away from zero
}

double wrap_angle(double a) {
  double d = std::fmod(a + M_PI, 2.0 * M_PI);
  if (d <= 0.0) d += 2.0 * M_PI;
  return d - M_PI;
}

void FrameGateConfig::validate() const {
  if (!(window > 0.0) || !std::isfinite(window))
    throw std::invalid_argument("FrameGateConfig: window must be positive");
}

FrameGate::FrameGate(const FrameGateConfig& cfg) : cfg_(cfg) { cfg_.validate(); }

namespace {
constexpr int kRequired[] = {static_cast<int>(Channel::heading),
                             static_cast<int>(Channel::thrust_left),
                             static_cast<int>(Channel::thrust_right)};
}

std::optional<MeasurementFrame> FrameGate::push(const Message& msg) {
  const int idx = static_cast<int>(msg.channel);
  Slot& slot = state_.slots[idx];
  if (!std::isfinite(msg.t) || !std::isfinite(msg.value) ||
      (slot.has && msg.t < slot.t)) {
    ++skipped_;
    return std::nullopt;
  }
  slot = Slot{true, msg.t, msg.value, false};

  double t_min = std::numeric_limits<double>::infinity();
  double t_max = -std::numeric_limits<double>::infinity();
  for (int c : kRequired) {
    const Slot& s = state_.slots[c];
    if (!s.has || s.consumed) return std::nullopt;
    t_min = std::min(t_min, s.t);
    t_max = std::max(t_max, s.t);
  }
  if (t_max - t_min > cfg_.window) return std::nullopt;

  MeasurementFrame frame;
  frame.t = t_max;
  frame.theta = state_.slots[static_cast<int>(Channel::heading)].value;
  frame.xi_l = state_.slots[static_cast<int>(Channel::thrust_left)].value;
  frame.xi_r = state_.slots[static_cast<int>(Channel::thrust_right)].value;
  for (int c : kRequired) state_.slots[c].consumed = true;

  const Slot& heading = state_.slots[static_cast<int>(Channel::heading)];
  frame.thetadot = 0.0;
  if (state_.has_prev_heading && heading.t > state_.prev_heading_t) {
    frame.thetadot = wrap_angle(heading.value - state_.prev_heading) /
                     (heading.t - state_.prev_heading_t);
  }
  Slot& rate = state_.slots[static_cast<int>(Channel::heading_rate)];
  if (rate.has && !rate.consumed && std::abs(t_max - rate.t) <= cfg_.window) {
    frame.thetadot = rate.value;
    rate.consumed = true;
  }
  state_.has_prev_heading = true;
  state_.prev_heading_t = heading.t;
  state_.prev_heading = heading.value;

  Slot& vel = state_.slots[static_cast<int>(Channel::velocity)];
  if (vel.has && !vel.consumed && std::abs(t_max - vel.t) <= cfg_.window) {
    frame.v_meas = quantize_velocity(vel.value, cfg_.quantization_step);
    vel.consumed = true;
  }
  return frame;
}

}  // namespace surgeid
