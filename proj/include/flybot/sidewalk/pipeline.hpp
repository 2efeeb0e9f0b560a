#pragma once

// Curb inspection: find the striped strip, cut it into blocks, read each run of
// three blocks as a bright/dark/vague vector and let the two-vertex Hopfield
// memory decide which blocks need repainting.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "flybot/error.hpp"
#include "flybot/neural/hopfield.hpp"
#include "flybot/raster.hpp"
#include "flybot/vision/wavelet.hpp"

namespace flybot::sidewalk {

struct Rect {
  int x = 0, y = 0, width = 0, height = 0;
  bool operator==(const Rect&) const = default;
};

struct Block {
  Rect rect;
  double mean = 0.0;  // normalized intensity in [0, 1]
};

struct BlockStrip {
  std::vector<Block> blocks;
  int source_width = 0;
  int source_height = 0;
  int band_top = 0;
  int band_height = 0;
  double band_response = 0.0;  // mean |wavelet response| per pixel in the band
};

struct StripConfig {
  double sigma = 2.0;
  int block_length = 16;
  int band_height = 16;
  double response_floor = 1.0;
};

namespace detail {

// Rows whose means feed the block intensities: the central half of the band,
// so a band found a row or two off still reads clean block interiors.
inline std::pair<int, int> inner_rows(int top, int height) {
  const int margin = height / 4;
  return {top + margin, std::max(top + margin + 1, top + height - margin)};
}

}  // namespace detail

/// Picks the horizontal band of `band_height` rows with the largest summed
/// |Mexican-Hat response|, then cuts it into blocks of `block_length`. The
/// block phase is the offset that maximizes mean contrast between neighbours.
inline BlockStrip extract_strip(const raster::Image& img, const StripConfig& cfg) {
  const raster::Image gray = raster::to_grayscale(img);
  if (cfg.block_length < 1 || cfg.band_height < 1) {
    throw Error(ErrorCode::ImageTooSmall, "block length and band height must be positive");
  }
  if (gray.width() < cfg.block_length || gray.height() < 2) {
    throw Error(ErrorCode::ImageTooSmall, "image smaller than one block");
  }
  const int w = gray.width();
  const int h = gray.height();
  const int band = std::min(cfg.band_height, h);

  const auto response = vision::wavelet_response(gray, cfg.sigma);
  std::vector<double> row_energy(static_cast<std::size_t>(h), 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) row_energy[y] += std::abs(response.at(x, y));

  double window = 0.0;
  for (int y = 0; y < band; ++y) window += row_energy[y];
  double best = window;
  int best_top = 0;
  for (int top = 1; top + band <= h; ++top) {
    window += row_energy[top + band - 1] - row_energy[top - 1];
    if (window > best) {
      best = window;
      best_top = top;
    }
  }
  const double per_pixel = best / (static_cast<double>(band) * w);
  if (!(per_pixel >= cfg.response_floor)) {
    throw Error(ErrorCode::NoStripFound, "strongest band response below floor");
  }

  const auto [r0, r1] = detail::inner_rows(best_top, band);
  std::vector<double> column(static_cast<std::size_t>(w), 0.0);
  for (int y = r0; y < r1; ++y)
    for (int x = 0; x < w; ++x) column[x] += gray.at(x, y);
  for (double& c : column) c /= 255.0 * (r1 - r0);

  const int len = cfg.block_length;
  auto block_means = [&](int offset) {
    std::vector<double> means;
    for (int x0 = offset; x0 + len <= w; x0 += len) {
      double s = 0.0;
      for (int x = x0; x < x0 + len; ++x) s += column[x];
      means.push_back(s / len);
    }
    return means;
  };
  int best_offset = 0;
  double best_contrast = -1.0;
  for (int offset = 0; offset < len && offset + len <= w; ++offset) {
    const auto means = block_means(offset);
    double contrast = 0.0;
    for (std::size_t i = 1; i < means.size(); ++i) contrast += std::abs(means[i] - means[i - 1]);
    if (means.size() > 1) contrast /= static_cast<double>(means.size() - 1);
    if (contrast > best_contrast + 1e-12) {
      best_contrast = contrast;
      best_offset = offset;
    }
  }

  BlockStrip strip;
  strip.source_width = w;
  strip.source_height = h;
  strip.band_top = best_top;
  strip.band_height = band;
  strip.band_response = per_pixel;
  const auto means = block_means(best_offset);
  for (std::size_t i = 0; i < means.size(); ++i) {
    strip.blocks.push_back(
        {{best_offset + static_cast<int>(i) * len, best_top, len, band}, std::clamp(means[i], 0.0, 1.0)});
  }
  return strip;
}

inline BlockStrip extract_strip(const raster::Image& img, double sigma, int block_length) {
  StripConfig cfg;
  cfg.sigma = sigma;
  cfg.block_length = block_length;
  return extract_strip(img, cfg);
}

struct SegmentPattern {
  std::size_t start = 0;
  std::array<double, 3> means{};
};

using Ternary = std::array<int, 3>;

inline constexpr double kDefaultBrightMin = 0.7;
inline constexpr double kDefaultDarkMax = 0.3;

/// +1 bright (mean >= bright_min), -1 dark (mean <= dark_max), 0 in between.
inline Ternary encode_ternary(const SegmentPattern& seg, double bright_min = kDefaultBrightMin,
                              double dark_max = kDefaultDarkMax) {
  if (!(0.0 <= dark_max && dark_max < bright_min && bright_min <= 1.0)) {
    throw Error(ErrorCode::BadThresholds, "need 0 <= dark_max < bright_min <= 1");
  }
  Ternary out{};
  for (std::size_t i = 0; i < 3; ++i) {
    const double m = seg.means[i];
    out[i] = m >= bright_min ? 1 : (m <= dark_max ? -1 : 0);
  }
  return out;
}

enum class Verdict { Intact, PaintBlocks, Unresolved };

inline constexpr std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Intact: return "intact";
    case Verdict::PaintBlocks: return "paint";
    case Verdict::Unresolved: return "unresolved";
  }
  return "unresolved";
}

struct PaintDecision {
  std::size_t start = 0;
  Ternary encoded{};
  std::optional<Ternary> vertex;
  Verdict verdict = Verdict::Unresolved;
  std::vector<std::size_t> paint_blocks;  // absolute block indices, within [start, start + 2]
};

/// Intact when the vector is already a stored vertex. Otherwise recall the
/// nearest vertex and mark every block that disagrees with it. Recall failure,
/// or a fixed point that is not a stored vertex, leaves the segment Unresolved.
inline PaintDecision classify_segment(const Ternary& encoded, const neural::HopfieldNet& net,
                                      std::size_t start = 0, int max_iter = 10) {
  PaintDecision d;
  d.start = start;
  d.encoded = encoded;
  auto stored = [&](const neural::State& s) {
    return std::find(net.patterns().begin(), net.patterns().end(), s) != net.patterns().end();
  };
  const neural::State input(encoded.begin(), encoded.end());
  if (stored(input)) {
    d.vertex = encoded;
    d.verdict = Verdict::Intact;
    return d;
  }
  try {
    const auto recall = neural::hopfield_recall(net, input, max_iter);
    if (!stored(recall.state)) return d;
    Ternary vertex{};
    std::copy(recall.state.begin(), recall.state.end(), vertex.begin());
    d.vertex = vertex;
    for (std::size_t i = 0; i < 3; ++i)
      if (vertex[i] != encoded[i]) d.paint_blocks.push_back(start + i);
    d.verdict = d.paint_blocks.empty() ? Verdict::Intact : Verdict::PaintBlocks;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NonConvergent) throw;
  }
  return d;
}

struct InspectConfig {
  StripConfig strip;
  double bright_min = kDefaultBrightMin;
  double dark_max = kDefaultDarkMax;
  int max_iter = 10;
};

struct InspectionReport {
  BlockStrip strip;
  std::vector<PaintDecision> decisions;
  std::vector<std::size_t> flagged;  // ascending block indices
};

struct Inspection {
  InspectionReport report;
  raster::Image overlay;
};

/// Copy of the gray source with each flagged block outlined at 255.
inline raster::Image render_overlay(const raster::Image& img, const InspectionReport& report) {
  raster::Image out = raster::to_grayscale(img);
  for (std::size_t idx : report.flagged) {
    const Rect& r = report.strip.blocks[idx].rect;
    const int x1 = std::min(r.x + r.width, out.width()) - 1;
    const int y1 = std::min(r.y + r.height, out.height()) - 1;
    for (int x = r.x; x <= x1; ++x) out.at(x, r.y) = out.at(x, y1) = 255;
    for (int y = r.y; y <= y1; ++y) out.at(r.x, y) = out.at(x1, y) = 255;
  }
  return out;
}

/// End-to-end inspection: every window of three consecutive blocks (stride 1)
/// is classified; a block is flagged when any window covering it flags it.
inline Inspection inspect(const raster::Image& img, const InspectConfig& cfg = {}) {
  static const neural::HopfieldNet net = neural::two_vertex_net();
  InspectionReport report;
  report.strip = extract_strip(img, cfg.strip);
  const auto& blocks = report.strip.blocks;
  std::set<std::size_t> flagged;
  for (std::size_t s = 0; s + 3 <= blocks.size(); ++s) {
    const SegmentPattern seg{s, {blocks[s].mean, blocks[s + 1].mean, blocks[s + 2].mean}};
    auto decision = classify_segment(encode_ternary(seg, cfg.bright_min, cfg.dark_max), net, s,
                                     cfg.max_iter);
    flagged.insert(decision.paint_blocks.begin(), decision.paint_blocks.end());
    report.decisions.push_back(std::move(decision));
  }
  report.flagged.assign(flagged.begin(), flagged.end());
  raster::Image overlay = render_overlay(img, report);
  return {std::move(report), std::move(overlay)};
}

}  // namespace flybot::sidewalk
