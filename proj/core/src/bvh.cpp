#include <algorithm>
#include <cmath>

#include "fofx/errors.hpp"
#include "fofx/metrics.hpp"

namespace fofx {

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Voronoi-region walk (Ericson, Real-Time Collision Detection 5.1.5).
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return a + v * ab;
  }

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return a + w * ac;
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return b + w * (c - b);
  }

  const double denom = va + vb + vc;
  if (denom == 0.0) {
    // Degenerate triangle: fall back to the closest of its edges.
    const auto on_segment = [&](const Vec3& s, const Vec3& e) {
      const Vec3 d = e - s;
      const double len2 = d.squaredNorm();
      const double t = len2 > 0.0 ? std::clamp((p - s).dot(d) / len2, 0.0, 1.0) : 0.0;
      return Vec3(s + t * d);
    };
    Vec3 best = on_segment(a, b);
    for (const Vec3& q : {on_segment(b, c), on_segment(c, a)}) {
      if ((q - p).squaredNorm() < (best - p).squaredNorm()) best = q;
    }
    return best;
  }
  const double v = vb / denom;
  const double w = vc / denom;
  return a + ab * v + ac * w;
}

namespace {
constexpr std::uint32_t kLeafSize = 4;

double box_distance2(const Vec3& p, const Vec3& lo, const Vec3& hi) {
  const Vec3 d = (lo - p).cwiseMax(Vec3::Zero()).cwiseMax(p - hi);
  return d.squaredNorm();
}
}  // namespace

MeshDistance::MeshDistance(const TriangleMesh& mesh) : mesh_(&mesh) {
  if (mesh.triangles.empty()) throw EmptyInput("distance queries need a non-empty mesh");
  mesh.validate();
  const auto n = static_cast<std::uint32_t>(mesh.triangles.size());
  order_.resize(n);
  std::vector<Vec3> centroids(n);
  for (std::uint32_t t = 0; t < n; ++t) {
    order_[t] = t;
    const auto& tri = mesh.triangles[t];
    centroids[t] = (mesh.vertices[tri[0]] + mesh.vertices[tri[1]] + mesh.vertices[tri[2]]) / 3.0;
  }
  nodes_.reserve(2 * n / kLeafSize + 2);
  build(0, n, centroids);
}

std::uint32_t MeshDistance::build(std::uint32_t first, std::uint32_t count,
                                  std::vector<Vec3>& centroids) {
  const auto index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back({Vec3::Zero(), Vec3::Zero(), 0, 0, 0});
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  Vec3 clo = lo;
  Vec3 chi = hi;
  for (std::uint32_t i = first; i < first + count; ++i) {
    const auto& tri = mesh_->triangles[order_[i]];
    for (auto v : tri) {
      lo = lo.cwiseMin(mesh_->vertices[v]);
      hi = hi.cwiseMax(mesh_->vertices[v]);
    }
    clo = clo.cwiseMin(centroids[order_[i]]);
    chi = chi.cwiseMax(centroids[order_[i]]);
  }
  nodes_[index].lo = lo;
  nodes_[index].hi = hi;
  if (count <= kLeafSize) {
    nodes_[index].first = first;
    nodes_[index].count = count;
    return index;
  }
  int axis = 0;
  (chi - clo).maxCoeff(&axis);
  const std::uint32_t half = count / 2;
  std::nth_element(order_.begin() + first, order_.begin() + first + half,
                   order_.begin() + first + count, [&](std::uint32_t a, std::uint32_t b) {
                     if (centroids[a][axis] != centroids[b][axis]) {
                       return centroids[a][axis] < centroids[b][axis];
                     }
                     return a < b;
                   });
  const std::uint32_t left = build(first, half, centroids);
  const std::uint32_t right = build(first + half, count - half, centroids);
  nodes_[index].first = left;
  nodes_[index].count = 0;
  nodes_[index].right = right;
  return index;
}

MeshDistance::Closest MeshDistance::closest(const Vec3& p) const {
  Closest best;
  double best2 = std::numeric_limits<double>::infinity();
  std::uint32_t stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (box_distance2(p, node.lo, node.hi) >= best2) continue;
    if (node.count > 0) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const auto t = order_[i];
        const auto& tri = mesh_->triangles[t];
        const Vec3 q = closest_point_on_triangle(p, mesh_->vertices[tri[0]], mesh_->vertices[tri[1]],
                                                 mesh_->vertices[tri[2]]);
        const double d2 = (q - p).squaredNorm();
        if (d2 < best2 || (d2 == best2 && t < best.triangle)) {
          best2 = d2;
          best.triangle = t;
          best.point = q;
        }
      }
      continue;
    }
    const Node& l = nodes_[node.first];
    const Node& r = nodes_[node.right];
    const double dl = box_distance2(p, l.lo, l.hi);
    const double dr = box_distance2(p, r.lo, r.hi);
    // Push the farther child first so the nearer one is visited next.
    if (dl <= dr) {
      if (dr < best2) stack[top++] = node.right;
      if (dl < best2) stack[top++] = node.first;
    } else {
      if (dl < best2) stack[top++] = node.first;
      if (dr < best2) stack[top++] = node.right;
    }
  }
  best.distance = std::sqrt(best2);
  return best;
}

double point_to_surface(const Vec3& p, const TriangleMesh& mesh) {
  return MeshDistance(mesh).distance(p);
}

double point_to_surface_brute_force(const Vec3& p, const TriangleMesh& mesh) {
  if (mesh.triangles.empty()) throw EmptyInput("distance queries need a non-empty mesh");
  double best2 = std::numeric_limits<double>::infinity();
  for (const auto& tri : mesh.triangles) {
    const Vec3 q = closest_point_on_triangle(p, mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                             mesh.vertices[tri[2]]);
    best2 = std::min(best2, (q - p).squaredNorm());
  }
  return std::sqrt(best2);
}

}  // namespace fofx
