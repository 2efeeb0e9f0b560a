#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

#include "flybot/error.hpp"
#include "flybot/raster.hpp"

namespace flybot::vision {

struct OtsuResult {
  int threshold = 0;
  /// Set when all mass sits in one bin; `threshold` is then that bin.
  bool degenerate = false;
};

/// Exhaustive Otsu search over t in [0, 255] for the split {<= t} / {> t}.
///
/// Between-class variance is proportional to D^2 / (n0 * n1) with
/// D = N * S0 - n0 * S, so candidates are compared as exact rationals and
/// ties resolve to the smallest t independent of floating-point rounding.
inline OtsuResult otsu_threshold(const raster::Histogram& hist) {
  using boost::multiprecision::int512_t;

  std::uint64_t total = 0;
  std::uint64_t weighted = 0;
  int occupied = 0;
  int last_occupied = 0;
  for (int v = 0; v < 256; ++v) {
    if (hist[v] == 0) continue;
    if (hist[v] >= (std::uint64_t{1} << 55) || total >= (std::uint64_t{1} << 55)) {
      throw Error(ErrorCode::BadSample, "histogram mass too large");
    }
    total += hist[v];
    weighted += hist[v] * static_cast<std::uint64_t>(v);
    ++occupied;
    last_occupied = v;
  }
  if (total == 0) throw Error(ErrorCode::EmptyHistogram, "histogram has no mass");
  if (occupied == 1) return {last_occupied, true};

  int best_t = 0;
  int512_t best_num = 0;  // D^2 of the incumbent
  int512_t best_den = 1;  // n0 * n1 of the incumbent
  std::uint64_t n0 = 0;
  std::uint64_t s0 = 0;
  for (int t = 0; t < 256; ++t) {
    n0 += hist[t];
    s0 += hist[t] * static_cast<std::uint64_t>(t);
    const std::uint64_t n1 = total - n0;
    if (n0 == 0 || n1 == 0) continue;
    const int512_t d = int512_t(total) * s0 - int512_t(n0) * weighted;
    const int512_t num = d * d;
    const int512_t den = int512_t(n0) * n1;
    if (num * best_den > best_num * den) {
      best_num = num;
      best_den = den;
      best_t = t;
    }
  }
  return {best_t, false};
}

/// Pixels strictly above `threshold` become 255, the rest 0.
inline raster::Image apply_threshold(const raster::Image& gray, int threshold) {
  if (gray.channels() != 1) throw Error(ErrorCode::NotGrayscale, "threshold needs one channel");
  raster::Image out(gray.width(), gray.height(), 1);
  const auto src = gray.samples();
  auto dst = out.samples();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] > threshold ? 255 : 0;
  return out;
}

}  // namespace flybot::vision
