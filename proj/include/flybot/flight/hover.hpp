#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "flybot/error.hpp"
#include "flybot/flight/sizing.hpp"
#include "flybot/fuzzy/controllers.hpp"

namespace flybot::flight {

using fuzzy::kRotorCount;

struct ArmKeyframe {
  double t = 0.0;            // s
  double azimuth_deg = 0.0;  // degrees, not wrapped: 0 -> 360 is a full sweep
  double extension = 0.0;    // fraction of reach
  bool operator==(const ArmKeyframe&) const = default;
};

struct ArmPose {
  double azimuth_deg = 0.0;
  double extension = 0.0;
};

struct SimConfig {
  double vehicle_mass = 32.019;  // kg, all-up
  double rotor_radius = 0.5;     // m
  double inertia_roll = 0.8;     // kg m^2
  double inertia_pitch = 0.8;    // kg m^2
  double arm_mass = 0.94;        // kg
  double arm_reach = 0.6;        // m at full extension
  double time_step = 0.001;      // s
  double duration = 10.0;        // s
  bool controller = true;
  double damping_time = 0.2;  // s; tilt error fed to the stabilizer is angle + damping_time * rate
  fuzzy::StabilizerConfig stabilizer;
  std::vector<ArmKeyframe> trajectory{{0.0, 0.0, 1.0}, {10.0, 360.0, 1.0}};
};

struct HoverState {
  double t = 0.0;
  double roll = 0.0;
  double pitch = 0.0;
  double roll_rate = 0.0;
  double pitch_rate = 0.0;
  std::array<double, kRotorCount> rotor_thrusts{};
  double arm_azimuth = 0.0;
  double arm_extension = 0.0;
  bool operator==(const HoverState&) const = default;
};

inline void validate(const SimConfig& cfg) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::ConfigInvalid, why); };
  if (!(cfg.time_step > 0.0)) fail("time_step must be positive");
  if (!(cfg.duration >= cfg.time_step)) fail("duration must be at least one time step");
  if (!(cfg.vehicle_mass > 0.0)) fail("vehicle_mass must be positive");
  if (!(cfg.rotor_radius > 0.0)) fail("rotor_radius must be positive");
  if (!(cfg.inertia_roll > 0.0) || !(cfg.inertia_pitch > 0.0)) fail("inertia must be positive");
  if (!(cfg.arm_mass >= 0.0) || !(cfg.arm_reach >= 0.0)) fail("arm mass and reach must be >= 0");
  if (!(cfg.damping_time >= 0.0)) fail("damping_time must be >= 0");
  if (cfg.trajectory.empty()) fail("arm trajectory needs at least one keyframe");
  for (std::size_t i = 0; i < cfg.trajectory.size(); ++i) {
    const auto& k = cfg.trajectory[i];
    if (!std::isfinite(k.t) || !std::isfinite(k.azimuth_deg)) fail("non-finite keyframe");
    if (!(k.extension >= 0.0 && k.extension <= 1.0)) fail("keyframe extension outside [0, 1]");
    if (i > 0 && k.t < cfg.trajectory[i - 1].t) fail("keyframe times must be non-decreasing");
  }
}

/// Linear interpolation between keyframes, held constant outside them.
inline ArmPose arm_pose_at(const std::vector<ArmKeyframe>& keys, double t) {
  if (t <= keys.front().t) return {keys.front().azimuth_deg, keys.front().extension};
  for (std::size_t i = 1; i < keys.size(); ++i) {
    if (t > keys[i].t) continue;
    const auto& a = keys[i - 1];
    const auto& b = keys[i];
    const double span = b.t - a.t;
    const double u = span > 0.0 ? (t - a.t) / span : 1.0;
    return {a.azimuth_deg + u * (b.azimuth_deg - a.azimuth_deg),
            a.extension + u * (b.extension - a.extension)};
  }
  return {keys.back().azimuth_deg, keys.back().extension};
}

/// Reduced roll/pitch rigid-body model about hover, integrated with
/// semi-implicit Euler. Body frame: x at rotor 0, y at rotor 2, z up.
class HoverSimulator {
 public:
  explicit HoverSimulator(SimConfig cfg) : cfg_(std::move(cfg)), stabilizer_(cfg_.stabilizer) {
    validate(cfg_);
    for (int i = 0; i < kRotorCount / 2; ++i) {
      const double a = fuzzy::rotor_azimuth_deg(i) * std::numbers::pi / 180.0;
      cos_[i] = std::cos(a);
      sin_[i] = std::sin(a);
    }
  }

  double hover_thrust() const { return cfg_.vehicle_mass * kStandardGravity / kRotorCount; }

  std::vector<HoverState> run() const {
    const auto steps = static_cast<long>(std::llround(cfg_.duration / cfg_.time_step));
    std::vector<HoverState> trace;
    trace.reserve(static_cast<std::size_t>(steps) + 1);
    HoverState s;
    for (long k = 0;; ++k) {
      s.t = static_cast<double>(k) * cfg_.time_step;
      const ArmPose pose = arm_pose_at(cfg_.trajectory, s.t);
      s.arm_azimuth = pose.azimuth_deg;
      s.arm_extension = pose.extension;
      s.rotor_thrusts = thrusts(s, pose);
      trace.push_back(s);
      if (k == steps) break;

      // Opposite rotors share a lever arm with flipped sign, so pairing them
      // keeps a symmetric thrust set exactly torque-free.
      double sum_sin = 0.0, sum_cos = 0.0;
      for (int i = 0; i < kRotorCount / 2; ++i) {
        const double diff = s.rotor_thrusts[i] - s.rotor_thrusts[i + 4];
        sum_sin += diff * sin_[i];
        sum_cos += diff * cos_[i];
      }
      const double arm_weight = cfg_.arm_mass * kStandardGravity * cfg_.arm_reach * pose.extension;
      const double az = pose.azimuth_deg * std::numbers::pi / 180.0;
      const double torque_roll = cfg_.rotor_radius * sum_sin - arm_weight * std::sin(az);
      const double torque_pitch = -cfg_.rotor_radius * sum_cos + arm_weight * std::cos(az);

      s.roll_rate += cfg_.time_step * torque_roll / cfg_.inertia_roll;
      s.pitch_rate += cfg_.time_step * torque_pitch / cfg_.inertia_pitch;
      s.roll += cfg_.time_step * s.roll_rate;
      s.pitch += cfg_.time_step * s.pitch_rate;
    }
    return trace;
  }

  const SimConfig& config() const noexcept { return cfg_; }

 private:
  std::array<double, kRotorCount> thrusts(const HoverState& s, const ArmPose& pose) const {
    std::array<double, kRotorCount> out;
    out.fill(hover_thrust());
    if (!cfg_.controller) return out;
    const fuzzy::TiltError error{s.roll + cfg_.damping_time * s.roll_rate,
                                 s.pitch + cfg_.damping_time * s.pitch_rate};
    auto delta = stabilizer_.deltas(pose.azimuth_deg, pose.extension, error);
    // Rotors cannot push down: shrink all deltas together, which keeps the sum at zero.
    double scale = 1.0;
    for (double d : delta) {
      if (hover_thrust() + d < 0.0) scale = std::min(scale, hover_thrust() / -d);
    }
    for (int i = 0; i < kRotorCount; ++i) out[i] += scale * delta[i];
    return out;
  }

  SimConfig cfg_;
  fuzzy::Stabilizer stabilizer_;
  std::array<double, kRotorCount / 2> cos_{};
  std::array<double, kRotorCount / 2> sin_{};
};

inline std::vector<HoverState> simulate_hover(const SimConfig& cfg) {
  return HoverSimulator(cfg).run();
}

inline double max_tilt(const std::vector<HoverState>& trace) {
  double m = 0.0;
  for (const auto& s : trace) m = std::max({m, std::abs(s.roll), std::abs(s.pitch)});
  return m;
}

inline std::string trace_csv(const std::vector<HoverState>& trace) {
  std::ostringstream out;
  out.precision(17);
  out << "t,roll,pitch,roll_rate,pitch_rate";
  for (int i = 0; i < kRotorCount; ++i) out << ",thrust_" << i;
  out << ",arm_azimuth,arm_extension\n";
  for (const auto& s : trace) {
    out << s.t << ',' << s.roll << ',' << s.pitch << ',' << s.roll_rate << ',' << s.pitch_rate;
    for (double f : s.rotor_thrusts) out << ',' << f;
    out << ',' << s.arm_azimuth << ',' << s.arm_extension << '\n';
  }
  return out.str();
}

}  // namespace flybot::flight
