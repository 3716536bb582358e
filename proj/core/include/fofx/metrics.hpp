#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "fofx/geometry.hpp"

namespace fofx {

/// Points drawn uniformly (by area) from a mesh surface.
struct SampledSurface {
  std::vector<Vec3> points;
  std::vector<std::uint32_t> triangles;  // source triangle per point

  std::size_t size() const noexcept { return points.size(); }
};

/// Area-weighted triangle choice plus uniform barycentric sampling.
/// Deterministic for a given seed. Throws EmptyInput / DegenerateInput.
SampledSurface sample_surface(const TriangleMesh& mesh, std::size_t count, std::uint64_t seed);

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// Bounding-volume hierarchy over a mesh's triangles for exact
/// point-to-surface queries.
class MeshDistance {
 public:
  explicit MeshDistance(const TriangleMesh& mesh);

  struct Closest {
    double distance = std::numeric_limits<double>::infinity();
    std::uint32_t triangle = 0;
    Vec3 point = Vec3::Zero();
  };

  Closest closest(const Vec3& p) const;
  double distance(const Vec3& p) const { return closest(p).distance; }

 private:
  struct Node {
    Vec3 lo;
    Vec3 hi;
    std::uint32_t first;  // leaf: first index into order_; inner: left child
    std::uint32_t count;  // 0 for inner nodes (right child = left + 1 is not assumed)
    std::uint32_t right;
  };
  std::uint32_t build(std::uint32_t first, std::uint32_t count, std::vector<Vec3>& centroids);

  const TriangleMesh* mesh_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> order_;
};

/// Exact distance from a point to the closest triangle (BVH accelerated).
double point_to_surface(const Vec3& p, const TriangleMesh& mesh);
/// O(triangles) reference for the same quantity.
double point_to_surface_brute_force(const Vec3& p, const TriangleMesh& mesh);

/// Mean distance from the samples to `target`, summed in sample order.
double mean_surface_distance(const SampledSurface& samples, const MeshDistance& target);

/// Chamfer distance with explicit per-side seeds; swapping both meshes and
/// seeds gives exactly the same value.
double chamfer(const TriangleMesh& a, const TriangleMesh& b, std::size_t count,
               std::uint64_t seed_a, std::uint64_t seed_b);
/// Chamfer distance with the B-side seed derived from `seed`.
double chamfer(const TriangleMesh& a, const TriangleMesh& b, std::size_t count, std::uint64_t seed);

/// Mean distance of predicted-surface samples to the ground-truth mesh.
double p2s(const TriangleMesh& predicted, const TriangleMesh& ground_truth, std::size_t count,
           std::uint64_t seed);

std::uint64_t derived_seed(std::uint64_t seed);

}  // namespace fofx
