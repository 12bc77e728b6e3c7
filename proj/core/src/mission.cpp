#include "surgeid/mission.hpp"

#include <cmath>
#include <stdexcept>

#include "surgeid/rng.hpp"

namespace surgeid {

namespace {

double multisine_value(double offset, const std::vector<SineComponent>& sines, double tau) {
  double v = offset;
  for (const auto& s : sines) v += s.amp * std::sin(2.0 * M_PI * s.freq_hz * tau + s.phase);
  return v;
}

double amp_sum(const std::vector<SineComponent>& sines) {
  double a = 0.0;
  for (const auto& s : sines) a += std::abs(s.amp);
  return a;
}

}  // namespace

double MissionSegment::command_left(double tau) const {
  switch (kind) {
    case SegmentKind::multisine: return multisine_value(offset_l, sines_l, tau);
    case SegmentKind::step: return xi_l0;
    case SegmentKind::ramp:
      return xi_l0 + (xi_l1 - xi_l0) * (duration > 0.0 ? tau / duration : 0.0);
    case SegmentKind::idle: return 0.0;
    case SegmentKind::blackout: return xi_l0;
  }
  return 0.0;
}

double MissionSegment::command_right(double tau) const {
  switch (kind) {
    case SegmentKind::multisine: return multisine_value(offset_r, sines_r, tau);
    case SegmentKind::step: return xi_r0;
    case SegmentKind::ramp:
      return xi_r0 + (xi_r1 - xi_r0) * (duration > 0.0 ? tau / duration : 0.0);
    case SegmentKind::idle: return 0.0;
    case SegmentKind::blackout: return xi_r0;
  }
  return 0.0;
}

void MissionSegment::validate(double xi_max) const {
  if (!(duration > 0.0) || !std::isfinite(duration))
    throw std::invalid_argument("MissionSegment: duration must be positive");
  const auto check = [xi_max](double lo, double hi) {
    if (lo < 0.0 || hi > xi_max)
      throw std::invalid_argument("MissionSegment: commands leave [0, xi_max]");
  };
  switch (kind) {
    case SegmentKind::multisine:
      check(offset_l - amp_sum(sines_l), offset_l + amp_sum(sines_l));
      check(offset_r - amp_sum(sines_r), offset_r + amp_sum(sines_r));
      break;
    case SegmentKind::step:
    case SegmentKind::blackout:
      check(std::min(xi_l0, xi_r0), std::max(xi_l0, xi_r0));
      break;
    case SegmentKind::ramp:
      check(std::min({xi_l0, xi_l1, xi_r0, xi_r1}), std::max({xi_l0, xi_l1, xi_r0, xi_r1}));
      break;
    case SegmentKind::idle:
      break;
  }
}

double MissionScript::duration() const {
  double d = 0.0;
  for (const auto& s : segments) d += s.duration;
  return d;
}

void MissionScript::validate(double xi_max) const {
  if (!(message_period > 0.0) || !std::isfinite(message_period))
    throw std::invalid_argument("MissionScript: message_period must be positive");
  if (segments.empty() || !(duration() > 0.0))
    throw std::invalid_argument("MissionScript: empty mission");
  for (const auto& s : segments) s.validate(xi_max);
}

MissionScript::Sample MissionScript::sample(double t) const {
  double start = 0.0;
  for (const auto& seg : segments) {
    if (t < start + seg.duration || &seg == &segments.back()) {
      const double tau = std::min(std::max(t - start, 0.0), seg.duration);
      Sample s;
      s.xi_l = seg.command_left(tau);
      s.xi_r = seg.command_right(tau);
      s.heading_rate = seg.heading_rate;
      s.blackout = seg.kind == SegmentKind::blackout;
      return s;
    }
    start += seg.duration;
  }
  return {};
}

MissionScript make_pe_mission(double duration, double xi_max, double message_period) {
  MissionScript script;
  script.message_period = message_period;

  // Twelve phases, tuned against the surge plant so the regressor Gram stays
  // well conditioned along the closed-loop trajectory. The structure matters
  // more than the exact numbers:
  //   - zero-thrust coast phases let the hull decelerate through the whole
  //     speed range, anchoring the drag block (|v|v vs v vs |heading_rate*v|)
  //     independently of the thruster map;
  //   - single-thruster phases separate the left and right maps;
  //   - mixed phases at distinct heading rates and offset levels tie the
  //     speed-coupling terms (xi*v) to the rest.
  // Offsets and amplitudes are fractions of xi_max; durations are fractions
  // of the total. Sine frequencies sit well below the 10 Hz telemetry rate
  // and are mutually incommensurate within a phase.
  auto add = [&](double frac, double rate, double off_l,
                 std::vector<SineComponent> sines_l, double off_r,
                 std::vector<SineComponent> sines_r) {
    MissionSegment seg;
    seg.kind = SegmentKind::multisine;
    seg.duration = frac * duration;
    seg.heading_rate = rate;
    seg.offset_l = off_l * xi_max;
    seg.offset_r = off_r * xi_max;
    for (auto& s : sines_l) s.amp *= xi_max;
    for (auto& s : sines_r) s.amp *= xi_max;
    seg.sines_l = std::move(sines_l);
    seg.sines_r = std::move(sines_r);
    script.segments.push_back(seg);
  };

  add(0.047875, 0.492723, 0.0, {}, 0.0, {});
  add(0.082207, 0.220738,
      0.765729, {{0.053130, 0.013486, 3.71820}, {0.084530, 0.087241, 0.326036}, {0.083618, 0.469932, 3.76441}},
      0.020684, {{0.001844, 0.029630, 4.51664}, {0.002470, 0.320000, 0.886896}, {0.007856, 0.350000, 2.81712}});
  add(0.032912, -0.575502, 0.0, {}, 0.0, {});
  add(0.074305, 0.995927,
      0.0, {},
      0.509732, {{0.024103, 0.041020, 3.39486}, {0.194913, 0.102171, 5.77661}, {0.162464, 0.629499, 3.78896}});
  add(0.117773, -0.372058,
      0.0, {},
      0.233093, {{0.122116, 0.020314, 4.28429}, {0.066927, 0.320000, 5.15875}, {0.028359, 0.681251, 0.911119}});
  add(0.099601, -0.594808,
      0.127886, {{0.018610, 0.021803, 0.867259}, {0.004747, 0.320000, 3.26172}, {0.027798, 0.796271, 5.18067}},
      0.0, {});
  add(0.098007, 0.004744,
      0.526413, {{0.198537, 0.050000, 1.30341}, {0.090148, 0.246207, 1.98182}, {0.184902, 0.911255, 1.27416}},
      0.117338, {{0.051872, 0.011119, 1.59882}, {0.020955, 0.320000, 1.30247}, {0.033002, 0.734460, 2.29783}});
  add(0.039637, 0.318029, 0.0, {}, 0.0, {});
  add(0.070990, 0.073191,
      0.381211, {{0.124560, 0.037542, 1.68377}, {0.019913, 0.102614, 5.82982}, {0.079576, 0.350000, 1.00536}},
      0.021875, {{0.014188, 0.035775, 2.50821}, {0.001135, 0.060000, 3.16832}, {0.006552, 0.984990, 1.47266}});
  add(0.103222, -0.336996,
      0.403614, {{0.085608, 0.030814, 5.35096}, {0.080456, 0.060000, 0.097422}, {0.079910, 1.395610, 3.22478}},
      0.0, {});
  add(0.144793, 0.947378,
      0.0, {},
      0.267763, {{0.055329, 0.019639, 5.65778}, {0.107894, 0.219419, 2.65815}, {0.054724, 0.404623, 5.05215}});
  add(0.088678, 0.547236, 0.0, {}, 0.0, {});

  script.validate(xi_max);
  return script;
}

MissionScript make_training_mission(double duration, double xi_max, Rng& rng,
                                    double message_period) {
  MissionScript script;
  script.message_period = message_period;
  double remaining = duration;
  int cycle = 0;
  while (remaining > 0.0) {
    MissionSegment seg;
    const int kind = cycle++ % 6;
    switch (kind) {
      case 0:
      case 3: {
        seg.kind = SegmentKind::multisine;
        seg.duration = 60.0;
        seg.offset_l = (0.35 + 0.25 * rng.uniform()) * xi_max;
        seg.offset_r = (0.35 + 0.25 * rng.uniform()) * xi_max;
        for (int i = 0; i < 3; ++i) {
          const double budget_l = std::min(seg.offset_l, xi_max - seg.offset_l) / 3.0;
          const double budget_r = std::min(seg.offset_r, xi_max - seg.offset_r) / 3.0;
          seg.sines_l.push_back({budget_l * (0.5 + 0.5 * rng.uniform()),
                                 0.02 + 0.3 * rng.uniform(), 2.0 * M_PI * rng.uniform()});
          seg.sines_r.push_back({budget_r * (0.5 + 0.5 * rng.uniform()),
                                 0.02 + 0.3 * rng.uniform(), 2.0 * M_PI * rng.uniform()});
        }
        seg.heading_rate = rng.uniform(-0.5, 0.5);
        break;
      }
      case 1: {
        seg.kind = SegmentKind::step;
        seg.duration = 30.0;
        seg.xi_l0 = rng.uniform(0.1, 0.9) * xi_max;
        seg.xi_r0 = rng.uniform(0.1, 0.9) * xi_max;
        seg.heading_rate = rng.uniform(-0.3, 0.3);
        break;
      }
      case 2: {
        seg.kind = SegmentKind::ramp;
        seg.duration = 30.0;
        seg.xi_l0 = rng.uniform(0.05, 0.5) * xi_max;
        seg.xi_r0 = rng.uniform(0.05, 0.5) * xi_max;
        seg.xi_l1 = rng.uniform(0.5, 0.95) * xi_max;
        seg.xi_r1 = rng.uniform(0.5, 0.95) * xi_max;
        seg.heading_rate = rng.uniform(-0.3, 0.3);
        break;
      }
      case 4: {
        seg.kind = SegmentKind::idle;
        seg.duration = 15.0;
        seg.heading_rate = 0.0;
        break;
      }
      case 5: {
        seg.kind = SegmentKind::blackout;
        seg.duration = 20.0;
        seg.xi_l0 = rng.uniform(0.2, 0.6) * xi_max;
        seg.xi_r0 = rng.uniform(0.2, 0.6) * xi_max;
        seg.heading_rate = rng.uniform(-0.3, 0.3);
        break;
      }
    }
    seg.duration = std::min(seg.duration, remaining);
    remaining -= seg.duration;
    script.segments.push_back(seg);
  }
  script.validate(xi_max);
  return script;
}

}  // namespace surgeid
