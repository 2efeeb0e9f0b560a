#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "flybot/error.hpp"
#include "flybot/matrix.hpp"
#include "flybot/raster.hpp"
#include "flybot/vision/response_map.hpp"

namespace flybot::vision {

struct GaborParams {
  double wavelength = 8.0;   // pixels
  double orientation = 0.0;  // radians
  double sigma = 4.0;        // pixels
  double aspect = 0.5;
  double phase = 0.0;  // radians
};

/// Real Gabor kernel exp(-(x'^2 + g^2 y'^2) / 2s^2) cos(2 pi x' / l + psi) with
/// (x', y') rotated by theta. The kernel is made zero-mean and scaled to unit
/// L2 norm, so bank members of different sizes compete on equal terms.
inline ResponseMap gabor_kernel(const GaborParams& p) {
  if (!(p.wavelength > 0.0) || !(p.sigma > 0.0) || !(p.aspect > 0.0)) {
    throw Error(ErrorCode::BadGaborParams, "wavelength, sigma and aspect must be positive");
  }
  const int radius =
      static_cast<int>(std::ceil(3.0 * p.sigma * std::max(1.0, 1.0 / p.aspect)));
  const int side = 2 * radius + 1;
  const double c = std::cos(p.orientation);
  const double s = std::sin(p.orientation);
  ResponseMap k(side, side);
  for (int y = -radius; y <= radius; ++y) {
    for (int x = -radius; x <= radius; ++x) {
      const double xr = x * c + y * s;
      const double yr = -x * s + y * c;
      const double envelope =
          std::exp(-(xr * xr + p.aspect * p.aspect * yr * yr) / (2.0 * p.sigma * p.sigma));
      k.at(x + radius, y + radius) =
          envelope * std::cos(2.0 * std::numbers::pi * xr / p.wavelength + p.phase);
    }
  }
  const double mean = k.sum() / static_cast<double>(k.values.size());
  double norm = 0.0;
  for (double& v : k.values) {
    v -= mean;
    norm += v * v;
  }
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& v : k.values) v /= norm;
  }
  return k;
}

inline std::vector<ResponseMap> gabor_bank(const raster::Image& gray,
                                           std::span<const GaborParams> params) {
  if (gray.channels() != 1) throw Error(ErrorCode::NotGrayscale, "gabor bank needs one channel");
  if (params.empty()) throw Error(ErrorCode::EmptyBank, "no filters in bank");
  std::vector<ResponseMap> out;
  out.reserve(params.size());
  for (const auto& p : params) out.push_back(convolve(gray, gabor_kernel(p)));
  return out;
}

/// `orientations` evenly spaced directions in [0, pi) at each wavelength,
/// sigma tied to wavelength (about one octave of bandwidth).
inline std::vector<GaborParams> default_gabor_params(std::span<const double> wavelengths,
                                                     int orientations = 4) {
  std::vector<GaborParams> out;
  for (double lambda : wavelengths) {
    for (int i = 0; i < orientations; ++i) {
      out.push_back({lambda, std::numbers::pi * i / orientations, 0.56 * lambda, 0.5, 0.0});
    }
  }
  return out;
}

inline double mean_abs(const ResponseMap& map) {
  double s = 0.0;
  for (double v : map.values) s += std::abs(v);
  return map.values.empty() ? 0.0 : s / static_cast<double>(map.values.size());
}

/// Rows of `patch x patch` windows taken at `stride` across each response map,
/// concatenated per window position. Feeds pca_project.
inline Matrix patch_vectors(std::span<const ResponseMap> maps, int patch = 8, int stride = 8) {
  if (maps.empty()) throw Error(ErrorCode::EmptyBank, "no response maps");
  const int w = maps.front().width;
  const int h = maps.front().height;
  if (patch < 1 || stride < 1 || patch > w || patch > h) {
    throw Error(ErrorCode::InsufficientData, "patch does not fit the maps");
  }
  const int nx = (w - patch) / stride + 1;
  const int ny = (h - patch) / stride + 1;
  const std::size_t dim = maps.size() * static_cast<std::size_t>(patch) * patch;
  Matrix out(static_cast<std::size_t>(nx) * ny, dim);
  std::size_t r = 0;
  for (int py = 0; py < ny; ++py) {
    for (int px = 0; px < nx; ++px, ++r) {
      std::size_t c = 0;
      for (const auto& m : maps) {
        for (int y = 0; y < patch; ++y) {
          for (int x = 0; x < patch; ++x) out(r, c++) = m.at(px * stride + x, py * stride + y);
        }
      }
    }
  }
  return out;
}

}  // namespace flybot::vision
