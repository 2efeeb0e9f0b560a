#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "flybot/error.hpp"
#include "flybot/raster.hpp"

namespace flybot::vision {

/// Signed real-valued map, one value per pixel (filter responses, kernels).
struct ResponseMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  ResponseMap() = default;
  ResponseMap(int w, int h, double fill = 0.0)
      : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

  double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }

  double sum() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
};

/// Min-max scales a response map into a gray image for inspection.
/// A flat map becomes all zeros.
inline raster::Image to_image(const ResponseMap& map) {
  raster::Image out(map.width, map.height, 1);
  const auto [lo, hi] = std::minmax_element(map.values.begin(), map.values.end());
  const double range = *hi - *lo;
  auto dst = out.samples();
  for (std::size_t i = 0; i < map.values.size(); ++i) {
    const double t = range > 0.0 ? (map.values[i] - *lo) / range : 0.0;
    dst[i] = static_cast<std::uint8_t>(std::lround(t * 255.0));
  }
  return out;
}

namespace detail {

// Half-sample symmetric reflection (edge sample repeated): ... 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
inline int reflect_index(int i, int n) {
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

}  // namespace detail

/// 2-D convolution of a gray image with an odd-sized kernel, reflect-padded.
inline ResponseMap convolve(const raster::Image& gray, const ResponseMap& kernel) {
  if (gray.channels() != 1) throw Error(ErrorCode::NotGrayscale, "convolution needs one channel");
  const int rx = kernel.width / 2;
  const int ry = kernel.height / 2;
  const int w = gray.width();
  const int h = gray.height();

  std::vector<int> xs(static_cast<std::size_t>(w + 2 * rx));
  for (int i = 0; i < w + 2 * rx; ++i) xs[i] = detail::reflect_index(i - rx, w);
  std::vector<int> ys(static_cast<std::size_t>(h + 2 * ry));
  for (int i = 0; i < h + 2 * ry; ++i) ys[i] = detail::reflect_index(i - ry, h);

  // Flip once so the inner loop is a plain correlation.
  std::vector<double> flipped(kernel.values.rbegin(), kernel.values.rend());

  ResponseMap out(w, h);
  const auto src = gray.samples();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      const double* k = flipped.data();
      for (int j = 0; j < kernel.height; ++j) {
        const std::uint8_t* row = src.data() + static_cast<std::size_t>(ys[y + j]) * w;
        const int* xi = xs.data() + x;
        for (int i = 0; i < kernel.width; ++i) acc += *k++ * row[xi[i]];
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

}  // namespace flybot::vision
