#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "flybot/error.hpp"
#include "flybot/raster.hpp"

namespace flybot::sidewalk {

/// Parameters of a synthetic curb image: a horizontal band of alternating
/// bright and dark blocks on a flat background, some blocks faded to gray,
/// plus optional Gaussian noise.
struct SidewalkSpec {
  int block_count = 12;
  int block_length = 16;
  int band_height = 16;
  int margin_top = 24;
  int margin_bottom = 24;
  int bright = 220;
  int dark = 40;
  int erased = 128;
  int background = 110;
  bool start_bright = true;
  std::vector<int> erased_blocks;
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
};

namespace detail {

// Box-Muller over mt19937_64 so the noise field is identical across standard libraries.
class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : rng_(seed) {}
  double operator()() {
    const double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace detail

inline raster::Image generate_sidewalk(const SidewalkSpec& spec) {
  if (spec.block_count < 1 || spec.block_length < 1 || spec.band_height < 1 ||
      spec.margin_top < 0 || spec.margin_bottom < 0 || !(spec.noise_sigma >= 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "bad sidewalk generator parameters");
  }
  for (int b : spec.erased_blocks) {
    if (b < 0 || b >= spec.block_count) throw Error(ErrorCode::ConfigInvalid, "erased block out of range");
  }
  const int w = spec.block_count * spec.block_length;
  const int h = spec.margin_top + spec.band_height + spec.margin_bottom;
  std::vector<double> pixels(static_cast<std::size_t>(w) * h, spec.background);
  for (int b = 0; b < spec.block_count; ++b) {
    const bool bright = (b % 2 == 0) == spec.start_bright;
    const bool faded =
        std::find(spec.erased_blocks.begin(), spec.erased_blocks.end(), b) != spec.erased_blocks.end();
    const double value = faded ? spec.erased : (bright ? spec.bright : spec.dark);
    for (int y = spec.margin_top; y < spec.margin_top + spec.band_height; ++y)
      for (int x = b * spec.block_length; x < (b + 1) * spec.block_length; ++x)
        pixels[static_cast<std::size_t>(y) * w + x] = value;
  }
  if (spec.noise_sigma > 0.0) {
    detail::Gaussian noise(spec.seed);
    for (double& p : pixels) p += spec.noise_sigma * noise();
  }
  raster::Image img(w, h, 1);
  auto dst = img.samples();
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    dst[i] = static_cast<std::uint8_t>(std::clamp(std::lround(pixels[i]), 0L, 255L));
  }
  return img;
}

/// Random erased set with at most `max_erased` blocks and no faded run longer
/// than two, so every faded block sits in a window holding a decisive block.
inline std::vector<int> random_erased_set(std::mt19937_64& rng, int block_count, int max_erased = 3) {
  for (;;) {
    const int count = static_cast<int>(rng() % static_cast<std::uint64_t>(max_erased + 1));
    std::vector<int> picked;
    while (static_cast<int>(picked.size()) < std::min(count, block_count)) {
      const int b = static_cast<int>(rng() % static_cast<std::uint64_t>(block_count));
      if (std::find(picked.begin(), picked.end(), b) == picked.end()) picked.push_back(b);
    }
    std::sort(picked.begin(), picked.end());
    int run = 1;
    bool ok = true;
    for (std::size_t i = 1; i < picked.size(); ++i) {
      run = picked[i] == picked[i - 1] + 1 ? run + 1 : 1;
      if (run > 2) ok = false;
    }
    if (ok) return picked;
  }
}

}  // namespace flybot::sidewalk
