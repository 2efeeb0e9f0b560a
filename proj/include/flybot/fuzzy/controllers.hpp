#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>

#include "flybot/fuzzy/engine.hpp"

namespace flybot::fuzzy {

using MF = MembershipFunction;

/// Default dosing controller: green density (Low/Medium/High) drives the
/// spray volume (Small/Moderate/Large) in liters per unit area.
inline FuzzySystem dose_system() {
  FuzzyVariable density{"green_density", 0.0, 1.0, "fraction",
                        {{"Low", MF::triangular(0.0, 0.0, 0.5)},
                         {"Medium", MF::triangular(0.0, 0.5, 1.0)},
                         {"High", MF::triangular(0.5, 1.0, 1.0)}}};
  FuzzyVariable dose{"dose", 0.0, 10.0, "L",
                     {{"Small", MF::triangular(0.0, 1.0, 5.0)},
                      {"Moderate", MF::triangular(1.0, 5.0, 9.0)},
                      {"Large", MF::triangular(5.0, 9.0, 10.0)}}};
  std::vector<Rule> rules{
      {{{"green_density", "Low"}}, {"dose", "Small"}},
      {{{"green_density", "Medium"}}, {"dose", "Moderate"}},
      {{{"green_density", "High"}}, {"dose", "Large"}},
  };
  return FuzzySystem({density}, {dose}, rules);
}

/// Dose for a green density in [0, 1]; uses the first input and output of `sys`.
inline double pesticide_dose(const FuzzySystem& sys, double green_density) {
  const std::array<double, 1> in{green_density};
  return sys.infer(std::span<const double>(in)).front();
}

inline double pesticide_dose(double green_density) {
  static const FuzzySystem sys = dose_system();
  return pesticide_dose(sys, green_density);
}

inline constexpr int kRotorCount = 8;

inline double rotor_azimuth_deg(int rotor) { return 45.0 * rotor; }

struct TiltError {
  double roll = 0.0;   // radians
  double pitch = 0.0;  // radians
};

struct StabilizerConfig {
  double max_lift_delta = 7.0;  // N, scale of the arm-compensation term
  double tilt_gain = 20.0;      // N, scale of the attitude-correction term
};

/// Octocopter thrust redistribution against robot-arm motion.
///
/// Rotor i sits at azimuth 45 i degrees. A Mamdani rulebase maps each rotor's
/// angular distance to the arm (Near/Far) and the arm extension (Short/Long)
/// to a lift demand in [0, 1]. Rotors 0..3 receive half the demand difference
/// to their opposite rotor; rotors 4..7 receive the exact negation, so the
/// deltas always sum to zero. Tilt error adds an odd-symmetric correction
/// distributed the same way.
class Stabilizer {
 public:
  explicit Stabilizer(StabilizerConfig cfg = {})
      : cfg_(cfg), lift_(lift_system()), tilt_(tilt_system()) {}

  static FuzzySystem lift_system() {
    FuzzyVariable proximity{"proximity", 0.0, 180.0, "deg",
                            {{"Near", MF::triangular(0.0, 0.0, 90.0)},
                             {"Far", MF::trapezoidal(45.0, 135.0, 180.0, 180.0)}}};
    FuzzyVariable extension{"extension", 0.0, 1.0, "fraction",
                            {{"Short", MF::triangular(0.0, 0.0, 1.0)},
                             {"Long", MF::triangular(0.0, 1.0, 1.0)}}};
    FuzzyVariable lift{"lift", 0.0, 1.0, "fraction",
                       {{"None", MF::triangular(0.0, 0.0, 0.5)},
                        {"Full", MF::triangular(0.5, 1.0, 1.0)}}};
    std::vector<Rule> rules{
        {{{"extension", "Short"}}, {"lift", "None"}},
        {{{"extension", "Long"}, {"proximity", "Far"}}, {"lift", "None"}},
        {{{"extension", "Long"}, {"proximity", "Near"}}, {"lift", "Full"}},
    };
    return FuzzySystem({proximity, extension}, {lift}, rules);
  }

  static FuzzySystem tilt_system() {
    FuzzyVariable error{"tilt_error", -0.3, 0.3, "rad",
                        {{"Negative", MF::triangular(-0.3, -0.3, 0.0)},
                         {"Zero", MF::triangular(-0.3, 0.0, 0.3)},
                         {"Positive", MF::triangular(0.0, 0.3, 0.3)}}};
    FuzzyVariable correction{"correction", -1.0, 1.0, "",
                             {{"Negative", MF::triangular(-1.0, -1.0, 0.0)},
                              {"Zero", MF::triangular(-1.0, 0.0, 1.0)},
                              {"Positive", MF::triangular(0.0, 1.0, 1.0)}}};
    std::vector<Rule> rules{
        {{{"tilt_error", "Negative"}}, {"correction", "Negative"}},
        {{{"tilt_error", "Zero"}}, {"correction", "Zero"}},
        {{{"tilt_error", "Positive"}}, {"correction", "Positive"}},
    };
    return FuzzySystem({error}, {correction}, rules);
  }

  /// Angular distance in [0, 180] between a rotor and the arm azimuth.
  static double proximity_deg(double arm_azimuth_deg, int rotor) {
    double d = std::fmod(std::abs(arm_azimuth_deg - rotor_azimuth_deg(rotor)), 360.0);
    return d > 180.0 ? 360.0 - d : d;
  }

  /// Lift demand of one rotor in [0, 1].
  double lift_demand(double arm_azimuth_deg, double arm_extension, int rotor) const {
    const std::array<double, 2> in{proximity_deg(arm_azimuth_deg, rotor), arm_extension};
    return lift_.infer(std::span<const double>(in)).front();
  }

  /// Odd function of the tilt error: exactly 0 at 0 and c(-e) = -c(e).
  double tilt_correction(double error) const {
    const std::array<double, 1> pos{error};
    const std::array<double, 1> neg{-error};
    return 0.5 * (tilt_.infer(std::span<const double>(pos)).front() -
                  tilt_.infer(std::span<const double>(neg)).front());
  }

  std::array<double, kRotorCount> deltas(double arm_azimuth_deg, double arm_extension,
                                         TiltError tilt = {}) const {
    std::array<double, kRotorCount> demand{};
    for (int i = 0; i < kRotorCount; ++i) demand[i] = lift_demand(arm_azimuth_deg, arm_extension, i);
    const double c_roll = tilt_correction(tilt.roll);
    const double c_pitch = tilt_correction(tilt.pitch);
    std::array<double, kRotorCount> out{};
    for (int i = 0; i < kRotorCount / 2; ++i) {
      const double a = rotor_azimuth_deg(i) * std::numbers::pi / 180.0;
      out[i] = cfg_.max_lift_delta * 0.5 * (demand[i] - demand[i + 4]) +
               cfg_.tilt_gain * (c_pitch * std::cos(a) - c_roll * std::sin(a));
      out[i + 4] = -out[i];
    }
    return out;
  }

  const StabilizerConfig& config() const noexcept { return cfg_; }

 private:
  StabilizerConfig cfg_;
  FuzzySystem lift_;
  FuzzySystem tilt_;
};

/// Per-rotor thrust deltas in newtons from the default stabilizer.
inline std::array<double, kRotorCount> stabilizer_deltas(double arm_azimuth_deg,
                                                         double arm_extension, TiltError tilt = {}) {
  static const Stabilizer stabilizer;
  return stabilizer.deltas(arm_azimuth_deg, arm_extension, tilt);
}

}  // namespace flybot::fuzzy
