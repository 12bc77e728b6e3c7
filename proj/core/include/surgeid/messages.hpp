#pragma once

#include <cmath>
#include <optional>
#include <string_view>

namespace surgeid {

enum class Channel { velocity, heading, heading_rate, thrust_left, thrust_right };

constexpr int kChannelCount = 5;

inline const char* to_string(Channel c) {
  switch (c) {
    case Channel::velocity: return "velocity";
    case Channel::heading: return "heading";
    case Channel::heading_rate: return "heading_rate";
    case Channel::thrust_left: return "thrust_left";
    case Channel::thrust_right: return "thrust_right";
  }
  return "unknown";
}

inline std::optional<Channel> channel_from_string(std::string_view s) {
  if (s == "velocity") return Channel::velocity;
  if (s == "heading") return Channel::heading;
  if (s == "heading_rate") return Channel::heading_rate;
  if (s == "thrust_left") return Channel::thrust_left;
  if (s == "thrust_right") return Channel::thrust_right;
  return std::nullopt;
}

// One timestamped scalar from the vehicle's publish-subscribe bus.
struct Message {
  double t{0.0};
  Channel channel{Channel::velocity};
  double value{0.0};
};

// A complete input set assembled by the staleness gate. v_meas is present
// only when a velocity message also fell inside the window; it carries the
// quantized value.
struct MeasurementFrame {
  double t{0.0};
  std::optional<double> v_meas;
  double theta{0.0};     // rad
  double thetadot{0.0};  // rad/s
  double xi_l{0.0};
  double xi_r{0.0};

  bool inputs_finite() const {
    return std::isfinite(t) && std::isfinite(theta) && std::isfinite(thetadot) &&
           std::isfinite(xi_l) && std::isfinite(xi_r) &&
           (!v_meas || std::isfinite(*v_meas));
  }
};

}  // namespace surgeid
