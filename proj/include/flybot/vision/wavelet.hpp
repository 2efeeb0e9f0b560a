#pragma once

#include <cmath>

#include "flybot/error.hpp"
#include "flybot/raster.hpp"
#include "flybot/vision/response_map.hpp"

namespace flybot::vision {

/// Unnormalized Mexican-Hat profile (1 - r^2/2s^2) exp(-r^2/2s^2); equals 1 at r = 0.
inline double mexican_hat(double r, double sigma) {
  const double q = r * r / (2.0 * sigma * sigma);
  return (1.0 - q) * std::exp(-q);
}

/// Square (2*radius+1) kernel sampled at integer offsets, then shifted by its
/// mean so that it sums to zero and flat regions produce no response.
inline ResponseMap mexican_hat_kernel(double sigma, int radius) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::NonPositiveSigma, "sigma must be positive");
  if (radius < 0) throw Error(ErrorCode::NonPositiveSigma, "radius must be non-negative");
  const int side = 2 * radius + 1;
  ResponseMap k(side, side);
  for (int y = -radius; y <= radius; ++y) {
    for (int x = -radius; x <= radius; ++x) {
      k.at(x + radius, y + radius) = mexican_hat(std::hypot(x, y), sigma);
    }
  }
  const double mean = k.sum() / static_cast<double>(k.values.size());
  for (double& v : k.values) v -= mean;
  return k;
}

inline int default_wavelet_radius(double sigma) { return static_cast<int>(std::ceil(4.0 * sigma)); }

inline ResponseMap wavelet_response(const raster::Image& gray, double sigma) {
  if (gray.channels() != 1) throw Error(ErrorCode::NotGrayscale, "wavelet needs one channel");
  return convolve(gray, mexican_hat_kernel(sigma, default_wavelet_radius(sigma)));
}

}  // namespace flybot::vision
