#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <random>

#include "fofx/errors.hpp"
#include "fofx/shapes.hpp"

namespace fofx {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

// Flips any triangle whose normal points toward `inside`; valid for shapes
// that are star-shaped with respect to the supplied interior point function.
template <class InsideFn>
void orient_outward(TriangleMesh& mesh, InsideFn inside) {
  for (auto& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    const Vec3 centroid = (a + b + c) / 3.0;
    const Vec3 n = (b - a).cross(c - a);
    if (n.dot(centroid - inside(centroid)) < 0.0) std::swap(t[1], t[2]);
  }
}

std::uint32_t add(TriangleMesh& m, const Vec3& v) {
  m.vertices.push_back(v);
  return static_cast<std::uint32_t>(m.vertices.size() - 1);
}

}  // namespace

TriangleMesh icosphere(double radius, int subdivisions, const Vec3& center) {
  require(radius > 0.0, "radius must be positive");
  require(subdivisions >= 0 && subdivisions <= 9, "subdivisions must be in [0, 9]");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  TriangleMesh m;
  m.vertices = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : m.vertices) v.normalize();
  m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                 {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                 {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoint;
    const auto mid = [&](std::uint32_t a, std::uint32_t b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const std::uint32_t idx = add(m, (m.vertices[a] + m.vertices[b]).normalized());
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<Triangle> next;
    next.reserve(m.triangles.size() * 4);
    for (const auto& tri : m.triangles) {
      const auto ab = mid(tri[0], tri[1]);
      const auto bc = mid(tri[1], tri[2]);
      const auto ca = mid(tri[2], tri[0]);
      next.push_back({tri[0], ab, ca});
      next.push_back({tri[1], bc, ab});
      next.push_back({tri[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.triangles = std::move(next);
  }
  orient_outward(m, [](const Vec3&) { return Vec3::Zero(); });
  for (auto& v : m.vertices) v = center + radius * v;
  return m;
}

TriangleMesh torus(double major_radius, double minor_radius, int major_segments, int minor_segments) {
  require(minor_radius > 0.0 && major_radius > minor_radius, "torus needs 0 < minor < major");
  require(major_segments >= 3 && minor_segments >= 3, "torus needs at least 3 segments");
  TriangleMesh m;
  for (int i = 0; i < major_segments; ++i) {
    const double u = 2.0 * kPi * i / major_segments;
    for (int j = 0; j < minor_segments; ++j) {
      const double v = 2.0 * kPi * j / minor_segments;
      const double r = major_radius + minor_radius * std::cos(v);
      m.vertices.emplace_back(r * std::cos(u), minor_radius * std::sin(v), r * std::sin(u));
    }
  }
  const auto id = [&](int i, int j) {
    return static_cast<std::uint32_t>((i % major_segments) * minor_segments + (j % minor_segments));
  };
  for (int i = 0; i < major_segments; ++i) {
    for (int j = 0; j < minor_segments; ++j) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  orient_outward(m, [&](const Vec3& p) {
    Vec3 ring(p.x(), 0.0, p.z());
    const double n = ring.norm();
    return n > 0.0 ? Vec3(ring * (major_radius / n)) : Vec3::Zero();
  });
  return m;
}

TriangleMesh cube(double half_extent, int segments) {
  require(half_extent > 0.0, "half extent must be positive");
  require(segments >= 1, "segments must be positive");
  TriangleMesh m;
  std::map<std::array<long, 3>, std::uint32_t> index;
  const auto vertex = [&](const std::array<long, 3>& g) {
    auto it = index.find(g);
    if (it != index.end()) return it->second;
    const Vec3 p(half_extent * (2.0 * g[0] / segments - 1.0), half_extent * (2.0 * g[1] / segments - 1.0),
                 half_extent * (2.0 * g[2] / segments - 1.0));
    const std::uint32_t i = add(m, p);
    index.emplace(g, i);
    return i;
  };
  for (int axis = 0; axis < 3; ++axis) {
    const int u = (axis + 1) % 3;
    const int v = (axis + 2) % 3;
    for (long side : {0L, static_cast<long>(segments)}) {
      for (long i = 0; i < segments; ++i) {
        for (long j = 0; j < segments; ++j) {
          std::array<long, 3> g00{}, g10{}, g11{}, g01{};
          for (auto* g : {&g00, &g10, &g11, &g01}) (*g)[axis] = side;
          g00[u] = i, g00[v] = j;
          g10[u] = i + 1, g10[v] = j;
          g11[u] = i + 1, g11[v] = j + 1;
          g01[u] = i, g01[v] = j + 1;
          const auto a = vertex(g00), b = vertex(g10), c = vertex(g11), d = vertex(g01);
          m.triangles.push_back({a, b, c});
          m.triangles.push_back({a, c, d});
        }
      }
    }
  }
  orient_outward(m, [](const Vec3&) { return Vec3::Zero(); });
  return m;
}

TriangleMesh capsule(double radius, double half_length, int segments, int rings) {
  require(radius > 0.0 && half_length >= 0.0, "capsule needs radius > 0 and half_length >= 0");
  require(segments >= 3 && rings >= 2, "capsule needs segments >= 3 and rings >= 2");
  TriangleMesh m;
  const std::uint32_t top = add(m, Vec3(0.0, -(half_length + radius), 0.0));
  // Latitude rings from the top pole down; the equator ring is duplicated so
  // the cylindrical part has its own pair of rings.
  std::vector<std::uint32_t> ring_start;
  const auto add_ring = [&](double polar, double y_offset) {
    ring_start.push_back(static_cast<std::uint32_t>(m.vertices.size()));
    for (int s = 0; s < segments; ++s) {
      const double a = 2.0 * kPi * s / segments;
      m.vertices.emplace_back(radius * std::sin(polar) * std::cos(a), y_offset - radius * std::cos(polar),
                              radius * std::sin(polar) * std::sin(a));
    }
  };
  for (int r = 1; r <= rings; ++r) add_ring(0.5 * kPi * r / rings, -half_length);
  for (int r = 0; r < rings; ++r) add_ring(0.5 * kPi + 0.5 * kPi * r / rings, half_length);
  const std::uint32_t bottom = add(m, Vec3(0.0, half_length + radius, 0.0));
  const auto at = [&](std::size_t ring, int s) { return ring_start[ring] + static_cast<std::uint32_t>(s % segments); };
  for (int s = 0; s < segments; ++s) m.triangles.push_back({top, at(0, s), at(0, s + 1)});
  for (std::size_t r = 0; r + 1 < ring_start.size(); ++r) {
    for (int s = 0; s < segments; ++s) {
      m.triangles.push_back({at(r, s), at(r + 1, s), at(r + 1, s + 1)});
      m.triangles.push_back({at(r, s), at(r + 1, s + 1), at(r, s + 1)});
    }
  }
  const std::size_t last = ring_start.size() - 1;
  for (int s = 0; s < segments; ++s) m.triangles.push_back({bottom, at(last, s + 1), at(last, s)});
  orient_outward(m, [&](const Vec3& p) { return Vec3(0.0, std::clamp(p.y(), -half_length, half_length), 0.0); });
  return m;
}

TriangleMesh cylinder(double radius, double half_length, int segments, int length_segments) {
  require(radius > 0.0 && half_length > 0.0, "cylinder needs positive radius and half_length");
  require(segments >= 3 && length_segments >= 1, "cylinder needs segments >= 3");
  TriangleMesh m;
  const auto ring = [&](int k) { return static_cast<std::uint32_t>(k * segments); };
  for (int k = 0; k <= length_segments; ++k) {
    const double x = -half_length + 2.0 * half_length * k / length_segments;
    for (int s = 0; s < segments; ++s) {
      const double a = 2.0 * kPi * s / segments;
      m.vertices.emplace_back(x, radius * std::cos(a), radius * std::sin(a));
    }
  }
  const auto at = [&](int k, int s) { return ring(k) + static_cast<std::uint32_t>(s % segments); };
  for (int k = 0; k < length_segments; ++k) {
    for (int s = 0; s < segments; ++s) {
      m.triangles.push_back({at(k, s), at(k + 1, s), at(k + 1, s + 1)});
      m.triangles.push_back({at(k, s), at(k + 1, s + 1), at(k, s + 1)});
    }
  }
  const std::uint32_t left = add(m, Vec3(-half_length, 0.0, 0.0));
  const std::uint32_t right = add(m, Vec3(half_length, 0.0, 0.0));
  for (int s = 0; s < segments; ++s) {
    m.triangles.push_back({left, at(0, s + 1), at(0, s)});
    m.triangles.push_back({right, at(length_segments, s), at(length_segments, s + 1)});
  }
  orient_outward(m, [&](const Vec3& p) {
    // Cap triangles sit at |x| = half_length; push their reference inward.
    const bool cap = std::abs(std::abs(p.x()) - half_length) < 1e-12;
    return cap ? Vec3(0.0, p.y(), p.z()) : Vec3(p.x(), 0.0, 0.0);
  });
  return m;
}

TriangleMesh open_sphere(double radius, int subdivisions, double fraction, std::uint64_t seed) {
  require(fraction >= 0.0 && fraction < 1.0, "fraction must be in [0, 1)");
  TriangleMesh m = icosphere(radius, subdivisions);
  const auto remove = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(m.triangles.size())));
  std::vector<std::size_t> order(m.triangles.size());
  std::iota(order.begin(), order.end(), 0);
  // Fisher-Yates with an explicit engine so the removed set is portable.
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(order[i], order[j]);
  }
  std::vector<char> drop(m.triangles.size(), 0);
  for (std::size_t i = 0; i < remove; ++i) drop[order[i]] = 1;
  std::vector<Triangle> kept;
  kept.reserve(m.triangles.size() - remove);
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    if (!drop[t]) kept.push_back(m.triangles[t]);
  }
  m.triangles = std::move(kept);
  return m;
}

}  // namespace fofx
