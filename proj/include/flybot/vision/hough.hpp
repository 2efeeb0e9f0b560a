#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "flybot/error.hpp"
#include "flybot/raster.hpp"

namespace flybot::vision {

struct LineHit {
  int rho = 0;         // signed pixels
  double theta = 0.0;  // degrees in [0, 180)
  int votes = 0;
  bool operator==(const LineHit&) const = default;
};

struct CircleHit {
  int cx = 0;
  int cy = 0;
  int radius = 0;
  int votes = 0;
  bool operator==(const CircleHit&) const = default;
};

namespace detail {

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

template <typename F>
void for_each_edge(const raster::Image& edges, F&& f) {
  for (int y = 0; y < edges.height(); ++y) {
    for (int x = 0; x < edges.width(); ++x) {
      if (edges.at(x, y) != 0) f(x, y);
    }
  }
}

}  // namespace detail

/// Line accumulator at 1 px rho resolution, rho = x cos(theta) + y sin(theta).
/// Every cell with at least `threshold` votes is returned, most votes first.
/// Near-parallel cells often collect the same votes, so equal counts are
/// ordered by the summed squared rounding residual of their voters (the cell
/// the pixels actually lie on wins), then by (theta, rho).
inline std::vector<LineHit> hough_lines(const raster::Image& edges, double theta_step = 1.0,
                                        int threshold = 10) {
  if (edges.channels() != 1) throw Error(ErrorCode::NotGrayscale, "edge map needs one channel");
  if (!(theta_step > 0.0)) throw Error(ErrorCode::BadThetaStep, "theta step must be positive");
  const double bins_real = 180.0 / theta_step;
  const int n_theta = static_cast<int>(std::lround(bins_real));
  if (n_theta < 1 || std::abs(bins_real - n_theta) > 1e-9) {
    throw Error(ErrorCode::BadThetaStep, "theta step must divide 180");
  }
  const int max_rho =
      static_cast<int>(std::ceil(std::hypot(edges.width(), edges.height())));
  const int n_rho = 2 * max_rho + 1;

  std::vector<double> cos_t(n_theta), sin_t(n_theta);
  for (int t = 0; t < n_theta; ++t) {
    cos_t[t] = std::cos(detail::deg_to_rad(t * theta_step));
    sin_t[t] = std::sin(detail::deg_to_rad(t * theta_step));
  }

  const std::size_t cells = static_cast<std::size_t>(n_theta) * n_rho;
  std::vector<int> acc(cells, 0);
  std::vector<double> residual(cells, 0.0);
  detail::for_each_edge(edges, [&](int x, int y) {
    for (int t = 0; t < n_theta; ++t) {
      const double exact = x * cos_t[t] + y * sin_t[t];
      const long rho = std::lround(exact);
      const std::size_t cell = static_cast<std::size_t>(t) * n_rho + (rho + max_rho);
      ++acc[cell];
      residual[cell] += (exact - rho) * (exact - rho);
    }
  });

  std::vector<LineHit> hits;
  std::vector<double> fit;
  for (int t = 0; t < n_theta; ++t) {
    for (int r = 0; r < n_rho; ++r) {
      const std::size_t cell = static_cast<std::size_t>(t) * n_rho + r;
      if (acc[cell] > 0 && acc[cell] >= threshold) {
        hits.push_back({r - max_rho, t * theta_step, acc[cell]});
        fit.push_back(residual[cell]);
      }
    }
  }
  std::vector<std::size_t> order(hits.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (hits[a].votes != hits[b].votes) return hits[a].votes > hits[b].votes;
    return fit[a] < fit[b];
  });
  std::vector<LineHit> sorted;
  sorted.reserve(hits.size());
  for (std::size_t i : order) sorted.push_back(hits[i]);
  return sorted;
}

/// Circle accumulator over (cx, cy, r). Each edge pixel votes once per
/// distinct center cell reached by sampling directions at 1 degree for every
/// radius in [r_min, r_max]. Only cells that are maxima of their 3x3x3
/// neighbourhood are reported, so one circle yields one hit.
inline std::vector<CircleHit> hough_circles(const raster::Image& edges, int r_min, int r_max,
                                            int threshold = 20) {
  if (edges.channels() != 1) throw Error(ErrorCode::NotGrayscale, "edge map needs one channel");
  if (r_min <= 0 || r_max < r_min) {
    throw Error(ErrorCode::BadRadiusRange,
                "need 0 < r_min <= r_max, got " + std::to_string(r_min) + ".." +
                    std::to_string(r_max));
  }
  const int w = edges.width();
  const int h = edges.height();
  const int n_r = r_max - r_min + 1;
  auto index = [&](int cx, int cy, int ri) {
    return (static_cast<std::size_t>(ri) * h + cy) * w + cx;
  };

  std::vector<double> cos_a(360), sin_a(360);
  for (int a = 0; a < 360; ++a) {
    cos_a[a] = std::cos(detail::deg_to_rad(a));
    sin_a[a] = std::sin(detail::deg_to_rad(a));
  }

  std::vector<int> acc(static_cast<std::size_t>(n_r) * w * h, 0);
  std::vector<std::pair<int, int>> centers;
  detail::for_each_edge(edges, [&](int x, int y) {
    for (int ri = 0; ri < n_r; ++ri) {
      const int r = r_min + ri;
      centers.clear();
      for (int a = 0; a < 360; ++a) {
        const int cx = static_cast<int>(std::lround(x - r * cos_a[a]));
        const int cy = static_cast<int>(std::lround(y - r * sin_a[a]));
        if (cx < 0 || cy < 0 || cx >= w || cy >= h) continue;
        centers.emplace_back(cx, cy);
      }
      std::sort(centers.begin(), centers.end());
      centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
      for (const auto& [cx, cy] : centers) ++acc[index(cx, cy, ri)];
    }
  });

  std::vector<CircleHit> hits;
  for (int ri = 0; ri < n_r; ++ri) {
    for (int cy = 0; cy < h; ++cy) {
      for (int cx = 0; cx < w; ++cx) {
        const int votes = acc[index(cx, cy, ri)];
        if (votes == 0 || votes < threshold) continue;
        bool is_max = true;
        for (int dr = -1; dr <= 1 && is_max; ++dr) {
          for (int dy = -1; dy <= 1 && is_max; ++dy) {
            for (int dx = -1; dx <= 1 && is_max; ++dx) {
              if (dr == 0 && dy == 0 && dx == 0) continue;
              const int nr = ri + dr, ny = cy + dy, nx = cx + dx;
              if (nr < 0 || ny < 0 || nx < 0 || nr >= n_r || ny >= h || nx >= w) continue;
              const int other = acc[index(nx, ny, nr)];
              // Plateaus keep only their first cell in scan order.
              const bool earlier = std::tie(nr, ny, nx) < std::tie(ri, cy, cx);
              if (other > votes || (other == votes && earlier)) is_max = false;
            }
          }
        }
        if (is_max) hits.push_back({cx, cy, r_min + ri, votes});
      }
    }
  }
  std::stable_sort(hits.begin(), hits.end(),
                   [](const CircleHit& a, const CircleHit& b) { return a.votes > b.votes; });
  return hits;
}

inline std::string to_csv(const std::vector<LineHit>& hits) {
  std::ostringstream out;
  out << "rho,theta,votes\n";
  for (const auto& hit : hits) out << hit.rho << ',' << hit.theta << ',' << hit.votes << '\n';
  return out.str();
}

inline std::string to_csv(const std::vector<CircleHit>& hits) {
  std::ostringstream out;
  out << "cx,cy,r,votes\n";
  for (const auto& hit : hits) {
    out << hit.cx << ',' << hit.cy << ',' << hit.radius << ',' << hit.votes << '\n';
  }
  return out.str();
}

}  // namespace flybot::vision
