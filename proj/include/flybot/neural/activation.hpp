#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "flybot/error.hpp"

namespace flybot::neural {

enum class ActivationKind { Sigmoid, ReLU, LeakyReLU };

inline constexpr double kDefaultLeakySlope = 0.01;

struct Activation {
  ActivationKind kind = ActivationKind::Sigmoid;
  double alpha = kDefaultLeakySlope;  // negative-side slope, LeakyReLU only

  static Activation sigmoid() { return {ActivationKind::Sigmoid, kDefaultLeakySlope}; }
  static Activation relu() { return {ActivationKind::ReLU, kDefaultLeakySlope}; }
  static Activation leaky(double alpha = kDefaultLeakySlope) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw Error(ErrorCode::BadActivation, "leaky slope must lie in (0, 1)");
    }
    return {ActivationKind::LeakyReLU, alpha};
  }

  /// True where the derivative is discontinuous at zero pre-activation.
  bool has_kink() const noexcept { return kind != ActivationKind::Sigmoid; }

  bool operator==(const Activation&) const = default;
};

inline double activate(const Activation& a, double x) {
  switch (a.kind) {
    case ActivationKind::Sigmoid: return 1.0 / (1.0 + std::exp(-x));
    case ActivationKind::ReLU: return x > 0.0 ? x : 0.0;
    case ActivationKind::LeakyReLU: return x >= 0.0 ? x : a.alpha * x;
  }
  return x;
}

/// ReLU's derivative at exactly zero is taken as 0.
inline double activate_deriv(const Activation& a, double x) {
  switch (a.kind) {
    case ActivationKind::Sigmoid: {
      const double s = 1.0 / (1.0 + std::exp(-x));
      return s * (1.0 - s);
    }
    case ActivationKind::ReLU: return x > 0.0 ? 1.0 : 0.0;
    case ActivationKind::LeakyReLU: return x >= 0.0 ? 1.0 : a.alpha;
  }
  return 1.0;
}

inline std::string_view to_string(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::Sigmoid: return "sigmoid";
    case ActivationKind::ReLU: return "relu";
    case ActivationKind::LeakyReLU: return "leaky";
  }
  return "sigmoid";
}

inline ActivationKind parse_activation_kind(std::string_view name) {
  if (name == "sigmoid") return ActivationKind::Sigmoid;
  if (name == "relu") return ActivationKind::ReLU;
  if (name == "leaky" || name == "leaky_relu" || name == "leakyrelu") {
    return ActivationKind::LeakyReLU;
  }
  throw Error(ErrorCode::BadActivation, "unknown activation '" + std::string(name) + "'");
}

}  // namespace flybot::neural
