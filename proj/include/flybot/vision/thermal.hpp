#pragma once

#include <cmath>
#include <string_view>

#include "flybot/error.hpp"

namespace flybot::vision {

inline constexpr double kStefanBoltzmann = 5.670374419e-8;  // W m^-2 K^-4

/// Infrared bands the thermal camera may observe. Descriptive only; the
/// conversions below use total emission.
struct ThermalBand {
  std::string_view name;
  double min_um;
  double max_um;
};
inline constexpr ThermalBand kLongWave{"long-wave", 8.0, 14.0};
inline constexpr ThermalBand kMidWave{"mid-wave", 3.0, 5.0};

inline double temperature_to_radiance(double kelvin) {
  if (!(kelvin >= 0.0)) throw Error(ErrorCode::NegativeTemperature, "temperature below 0 K");
  const double t2 = kelvin * kelvin;
  return kStefanBoltzmann * t2 * t2;
}

inline double radiance_to_temperature(double power_density) {
  if (!(power_density >= 0.0)) throw Error(ErrorCode::NegativeRadiance, "negative radiance");
  return std::sqrt(std::sqrt(power_density / kStefanBoltzmann));
}

}  // namespace flybot::vision
