#include <gtest/gtest.h>

#include "fofx/errors.hpp"
#include "fofx/geometry.hpp"
#include "fofx/shapes.hpp"
#include "support.hpp"

namespace fofx {
namespace {

TEST(NormalizeMesh, UnitCubeWithMargin) {
  const TriangleMesh c = cube(0.5);
  const NormalizedMesh n = normalize_mesh(c, 0.1);
  EXPECT_NEAR(n.transform.scale, 1.8, 1e-12);
  const BoundingBox box = bounding_box(n.mesh);
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(box.min[k], -0.9, 1e-12);
    EXPECT_NEAR(box.max[k], 0.9, 1e-12);
  }
}

TEST(NormalizeMesh, SmallMeshIsScaledUpToTouchBounds) {
  TriangleMesh m = icosphere(0.2, 1, Vec3(0.1, -0.3, 0.05));
  const NormalizedMesh n = normalize_mesh(m, 0.0);
  const BoundingBox box = bounding_box(n.mesh);
  EXPECT_NEAR(std::max(-box.min.minCoeff(), box.max.maxCoeff()), 1.0, 1e-12);
  EXPECT_NEAR(box.center().norm(), 0.0, 1e-12);
  // The transform maps the input onto the output.
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    EXPECT_NEAR((n.transform.apply(m.vertices[i]) - n.mesh.vertices[i]).norm(), 0.0, 1e-12);
    EXPECT_NEAR((n.transform.invert(n.mesh.vertices[i]) - m.vertices[i]).norm(), 0.0, 1e-12);
  }
}

TEST(NormalizeMesh, AspectRatioIsPreserved) {
  TriangleMesh m = cube(1.0);
  for (auto& v : m.vertices) v.x() *= 3.0;
  const BoundingBox box = bounding_box(normalize_mesh(m, 0.0).mesh);
  EXPECT_NEAR(box.extent().x() / box.extent().y(), 3.0, 1e-12);
}

TEST(NormalizeMesh, Errors) {
  EXPECT_THROW(normalize_mesh(TriangleMesh{}, 0.0), EmptyInput);
  TriangleMesh point;
  point.vertices = {{0.3, 0.3, 0.3}, {0.3, 0.3, 0.3}, {0.3, 0.3, 0.3}};
  point.triangles = {{0, 1, 2}};
  EXPECT_THROW(normalize_mesh(point, 0.0), DegenerateInput);
  EXPECT_THROW(normalize_mesh(cube(1.0), 1.0), DomainError);
  EXPECT_THROW(normalize_mesh(cube(1.0), -0.1), DomainError);
}

TEST(TriangleMesh, ValidateRejectsBadIndexAndNonFinite) {
  TriangleMesh m = test::square(0.5, 0.0);
  m.triangles.push_back({0, 1, 9});
  EXPECT_THROW(m.validate(), IndexError);
  TriangleMesh n = test::square(0.5, 0.0);
  n.vertices[0].x() = std::nan("");
  EXPECT_THROW(n.validate(), DomainError);
}

TEST(Geometry, CellCentersMatchPixelConvention) {
  EXPECT_DOUBLE_EQ(cell_center(0, 2), -0.5);
  EXPECT_DOUBLE_EQ(cell_center(1, 2), 0.5);
  EXPECT_DOUBLE_EQ(cell_center(0, 256), -1.0 + 1.0 / 256.0);
  EXPECT_DOUBLE_EQ(cell_center(-1, 4), -1.25);
}

TEST(Geometry, SphereVolumeAreaAndTopology) {
  const TriangleMesh s = icosphere(0.6, 4);
  EXPECT_EQ(s.triangles.size(), 5120u);
  EXPECT_EQ(euler_characteristic(s), 2);
  EXPECT_NEAR(signed_volume(s), 4.0 / 3.0 * M_PI * 0.216, 0.01);
  EXPECT_NEAR(surface_area(s), 4.0 * M_PI * 0.36, 0.02);
  const auto normals = vertex_normals(s);
  for (std::size_t i = 0; i < s.vertices.size(); ++i) {
    EXPECT_NEAR(normals[i].dot(s.vertices[i].normalized()), 1.0, 1e-3);
  }
}

TEST(Geometry, UniqueEdgesOfTetrahedron) {
  TriangleMesh t;
  t.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  t.triangles = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
  EXPECT_EQ(unique_edges(t).size(), 6u);
  EXPECT_EQ(euler_characteristic(t), 2);
  EXPECT_NEAR(signed_volume(t), 1.0 / 6.0, 1e-15);
}

}  // namespace
}  // namespace fofx
