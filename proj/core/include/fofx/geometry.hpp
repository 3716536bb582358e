#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cstdint>
#include <vector>

namespace fofx {

using Vec3 = Eigen::Vector3d;
using Triangle = std::array<std::uint32_t, 3>;

/// Indexed triangle mesh in normalized [-1,1]^3 coordinates.
///
/// Winding is a contract, not a checked property: counter-clockwise as seen
/// from outside marks the outward side. Open, non-manifold and inconsistently
/// wound meshes are all legal inputs.
///
/// Coordinates follow the raster convention used everywhere in the library:
/// x grows to the right, y grows downward, and the view direction is +z.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;

  bool empty() const noexcept { return triangles.empty(); }

  /// Throws IndexError for an out-of-range index and DomainError for a
  /// non-finite coordinate.
  void validate() const;
};

struct BoundingBox {
  Vec3 min = Vec3::Constant(0.0);
  Vec3 max = Vec3::Constant(0.0);

  Vec3 center() const { return 0.5 * (min + max); }
  Vec3 extent() const { return max - min; }
};

BoundingBox bounding_box(const TriangleMesh& mesh);

/// Uniform scale followed by a translation: p' = scale * p + translation.
struct Similarity {
  double scale = 1.0;
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return scale * p + translation; }
  Vec3 invert(const Vec3& p) const { return (p - translation) / scale; }
};

struct NormalizedMesh {
  TriangleMesh mesh;
  Similarity transform;  // maps input coordinates to normalized ones
};

/// Centers the mesh and scales it uniformly so that its largest half-extent
/// equals 1 - margin. Requires 0 <= margin < 1.
NormalizedMesh normalize_mesh(const TriangleMesh& mesh, double margin = 0.0);

TriangleMesh transformed(const TriangleMesh& mesh, const Similarity& t);

/// Unnormalized geometric normal (v1 - v0) x (v2 - v0); its length is twice
/// the triangle area.
Vec3 face_normal(const TriangleMesh& mesh, std::size_t tri);
double triangle_area(const TriangleMesh& mesh, std::size_t tri);
double surface_area(const TriangleMesh& mesh);

/// Area-weighted average of incident face normals, normalized. Vertices
/// without incident area get the zero vector.
std::vector<Vec3> vertex_normals(const TriangleMesh& mesh);

/// Signed enclosed volume (positive for outward-wound closed meshes).
double signed_volume(const TriangleMesh& mesh);

/// Unique undirected edges (i < j), sorted.
std::vector<std::array<std::uint32_t, 2>> unique_edges(const TriangleMesh& mesh);

/// V - E + F over the indexed connectivity.
long euler_characteristic(const TriangleMesh& mesh);

/// Continuous coordinate of a pixel (or sample) center along an axis with
/// `count` cells spanning [-1, 1]. Index may be outside [0, count) for padding.
constexpr double cell_center(long index, long count) {
  return -1.0 + 2.0 * (static_cast<double>(index) + 0.5) / static_cast<double>(count);
}

}  // namespace fofx
