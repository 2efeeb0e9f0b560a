#pragma once

#include <cstddef>

#include "flybot/error.hpp"
#include "flybot/raster.hpp"

namespace flybot::vision {

inline constexpr int kDefaultExgThreshold = 20;

struct GreenDensity {
  double fraction = 0.0;
  /// 255 where the pixel counts as vegetation, 0 elsewhere.
  raster::Image mask;
};

/// Fraction of pixels whose excess-green index 2G - R - B exceeds the threshold.
inline GreenDensity green_density(const raster::Image& rgb,
                                  int exg_threshold = kDefaultExgThreshold) {
  if (rgb.channels() != 3) throw Error(ErrorCode::NotRGB, "green density needs an RGB image");
  GreenDensity out{0.0, raster::Image(rgb.width(), rgb.height(), 1)};
  const auto src = rgb.samples();
  auto mask = out.mask.samples();
  std::size_t green = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const int exg = 2 * src[3 * i + 1] - src[3 * i] - src[3 * i + 2];
    if (exg > exg_threshold) {
      mask[i] = 255;
      ++green;
    }
  }
  out.fraction = static_cast<double>(green) / static_cast<double>(mask.size());
  return out;
}

}  // namespace flybot::vision
