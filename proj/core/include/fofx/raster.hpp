#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "fofx/geometry.hpp"

namespace fofx::raster {

/// Sub-pixel precision of snapped vertex positions (1/256 pixel).
inline constexpr std::int64_t kSubPixel = 256;
/// Vertices farther than this from the origin (in normalized units) are not
/// rasterized; the fixed-point products would overflow.
inline constexpr double kMaxCoordinate = 64.0;

struct FixedPoint {
  std::int64_t x;
  std::int64_t y;
};

inline FixedPoint snap(const Vec3& v, int height, int width) {
  return {std::llround((v.x() + 1.0) * 0.5 * static_cast<double>(width) * kSubPixel),
          std::llround((v.y() + 1.0) * 0.5 * static_cast<double>(height) * kSubPixel)};
}

inline std::int64_t edge_function(const FixedPoint& u, const FixedPoint& v, std::int64_t px,
                                  std::int64_t py) {
  return (v.x - u.x) * (py - u.y) - (v.y - u.y) * (px - u.x);
}

/// Top-left rule for an edge u -> v of a triangle with positive fixed-point
/// area (interior where the edge function is positive), y pointing down.
inline bool is_top_left(const FixedPoint& u, const FixedPoint& v) {
  const std::int64_t dx = v.x - u.x;
  const std::int64_t dy = v.y - u.y;
  return dy < 0 || (dy == 0 && dx > 0);
}

enum class Coverage { kRasterized, kDegenerate, kOutOfRange };

/// Visits every pixel center covered by the xy-projection of triangle (a, b, c)
/// under the top-left fill rule, calling fn(x, y, wa, wb, wc) with barycentric
/// weights in the caller's vertex order. `area_sign` receives the sign of the
/// projected signed area, which equals the sign of the geometric normal's z.
template <class Fn>
Coverage rasterize_triangle(const Vec3& a, const Vec3& b, const Vec3& c, int height, int width,
                            int& area_sign, Fn&& fn) {
  area_sign = 0;
  for (const Vec3* v : {&a, &b, &c}) {
    if (!(std::abs(v->x()) <= kMaxCoordinate && std::abs(v->y()) <= kMaxCoordinate)) {
      return Coverage::kOutOfRange;
    }
  }
  FixedPoint p0 = snap(a, height, width);
  FixedPoint p1 = snap(b, height, width);
  FixedPoint p2 = snap(c, height, width);
  std::int64_t area = edge_function(p0, p1, p2.x, p2.y);
  if (area == 0) return Coverage::kDegenerate;
  area_sign = area > 0 ? 1 : -1;
  const bool flipped = area < 0;
  if (flipped) {
    std::swap(p1, p2);
    area = -area;
  }

  const auto lo_index = [](std::int64_t lo, int count) {
    // smallest i with i*S + S/2 >= lo
    const std::int64_t num = lo - kSubPixel / 2;
    std::int64_t i = num >= 0 ? (num + kSubPixel - 1) / kSubPixel : -((-num) / kSubPixel);
    return static_cast<int>(std::clamp<std::int64_t>(i, 0, count));
  };
  const auto hi_index = [](std::int64_t hi, int count) {
    // largest i with i*S + S/2 <= hi
    const std::int64_t num = hi - kSubPixel / 2;
    std::int64_t i = num >= 0 ? num / kSubPixel : -((-num + kSubPixel - 1) / kSubPixel);
    return static_cast<int>(std::clamp<std::int64_t>(i, -1, count - 1));
  };
  const int x0 = lo_index(std::min({p0.x, p1.x, p2.x}), width);
  const int x1 = hi_index(std::max({p0.x, p1.x, p2.x}), width);
  const int y0 = lo_index(std::min({p0.y, p1.y, p2.y}), height);
  const int y1 = hi_index(std::max({p0.y, p1.y, p2.y}), height);

  const bool tl0 = is_top_left(p1, p2);
  const bool tl1 = is_top_left(p2, p0);
  const bool tl2 = is_top_left(p0, p1);
  const double inv_area = 1.0 / static_cast<double>(area);

  for (int y = y0; y <= y1; ++y) {
    const std::int64_t py = static_cast<std::int64_t>(y) * kSubPixel + kSubPixel / 2;
    for (int x = x0; x <= x1; ++x) {
      const std::int64_t px = static_cast<std::int64_t>(x) * kSubPixel + kSubPixel / 2;
      const std::int64_t e0 = edge_function(p1, p2, px, py);
      const std::int64_t e1 = edge_function(p2, p0, px, py);
      const std::int64_t e2 = edge_function(p0, p1, px, py);
      if (e0 < 0 || e1 < 0 || e2 < 0) continue;
      if ((e0 == 0 && !tl0) || (e1 == 0 && !tl1) || (e2 == 0 && !tl2)) continue;
      const double w0 = static_cast<double>(e0) * inv_area;
      const double w1 = static_cast<double>(e1) * inv_area;
      const double w2 = static_cast<double>(e2) * inv_area;
      if (flipped) {
        fn(x, y, w0, w2, w1);
      } else {
        fn(x, y, w0, w1, w2);
      }
    }
  }
  return Coverage::kRasterized;
}

}  // namespace fofx::raster
