#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "fofx/errors.hpp"
#include "fofx/fof2mesh.hpp"
#include "fofx/mesh2fof.hpp"
#include "fofx/metrics.hpp"
#include "fofx/shapes.hpp"

namespace fofx {
namespace {

// Every undirected edge used by exactly two triangles, once in each direction.
bool closed_oriented_manifold(const TriangleMesh& mesh) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) ++directed[{t[k], t[(k + 1) % 3]}];
  }
  for (const auto& [edge, count] : directed) {
    if (count != 1) return false;
    const auto it = directed.find({edge.second, edge.first});
    if (it == directed.end() || it->second != 1) return false;
  }
  return true;
}

ReliabilityMesh ball_field_mesh(int n, double radius) {
  return marching_cubes(n, n, n, 0.5, [&](int y, std::span<double> row) {
    std::fill(row.begin(), row.end(), 0.0);
    for (int x = 0; x < n; ++x) {
      for (int z = 0; z < n; ++z) {
        const Vec3 p(cell_center(x, n), cell_center(y, n), cell_center(z, n));
        row[static_cast<std::size_t>((x + 1) * (n + 2) + z + 1)] = 0.5 + radius - p.norm();
      }
    }
  });
}

const FofGrid& sphere_fof() {
  static const FofGrid fof = mesh_to_fof(icosphere(0.6, 4), 48, 48, 32).fof;
  return fof;
}

TEST(MarchingCubes, BallIsClosedAndOutwardWound) {
  const ReliabilityMesh r = ball_field_mesh(20, 0.6);
  ASSERT_FALSE(r.mesh.empty());
  EXPECT_TRUE(closed_oriented_manifold(r.mesh));
  EXPECT_EQ(euler_characteristic(r.mesh), 2);
  const double exact = 4.0 / 3.0 * std::numbers::pi * 0.216;
  EXPECT_NEAR(signed_volume(r.mesh), exact, 0.05 * exact);
  EXPECT_EQ(r.reliable.size(), r.mesh.vertices.size());
  EXPECT_EQ(r.origins.size(), r.mesh.vertices.size());
  for (std::size_t v = 0; v < r.mesh.vertices.size(); ++v) {
    EXPECT_EQ(r.reliable[v] == 1, r.origins[v].axis == EdgeAxis::kZ);
    EXPECT_NEAR(r.mesh.vertices[v].norm(), 0.6, 2.0 / 20.0);
  }
}

TEST(MarchingCubes, FieldTouchingTheBorderIsClosedByPadding) {
  // Everything inside: the padding layer closes the surface at the boundary.
  const ReliabilityMesh r = marching_cubes(3, 3, 3, 0.5, [](int, std::span<double> row) {
    std::fill(row.begin(), row.end(), 0.0);
    for (int x = 0; x < 3; ++x) {
      for (int z = 0; z < 3; ++z) row[static_cast<std::size_t>((x + 1) * 5 + z + 1)] = 1.0;
    }
  });
  EXPECT_TRUE(closed_oriented_manifold(r.mesh));
  EXPECT_GT(signed_volume(r.mesh), 0.0);
}

TEST(MarchingCubes, Errors) {
  EXPECT_THROW(marching_cubes_flagged(sphere_fof(), 1), DomainError);
  EXPECT_THROW(marching_cubes(0, 2, 2, 0.5, [](int, std::span<double>) {}), ShapeError);
}

TEST(FofToMesh, AllZeroGridGivesEmptyMesh) {
  const TriangleMesh mesh = fof_to_mesh(FofGrid(8, 8, 8), {.depth = 8});
  EXPECT_TRUE(mesh.empty());
  EXPECT_TRUE(mesh.vertices.empty());
}

TEST(Refine, ReliableVerticesLandOnTheRoot) {
  const FofGrid& fof = sphere_fof();
  const int depth = 48;
  const ReliabilityMesh raw = marching_cubes_flagged(fof, depth);
  RefineReport report;
  const ReliabilityMesh refined = refine_z_crossings(raw, fof, depth, 0.5, &report);
  EXPECT_EQ(report.refined + report.no_sign_change, raw.reliable_count());
  EXPECT_GT(report.refined, 0u);
  EXPECT_EQ(refined.reliable_count(), report.refined);
  for (std::size_t v = 0; v < raw.mesh.vertices.size(); ++v) {
    const Vec3& a = raw.mesh.vertices[v];
    const Vec3& b = refined.mesh.vertices[v];
    EXPECT_EQ(a.x(), b.x());
    EXPECT_EQ(a.y(), b.y());
    if (!refined.reliable[v]) {
      EXPECT_EQ(a.z(), b.z());
      continue;
    }
    const EdgeOrigin& o = refined.origins[v];
    EXPECT_NEAR(evaluate_point(fof, o.x, o.y, b.z()), 0.5, 1e-9);
    EXPECT_GE(b.z(), cell_center(o.z, depth));
    EXPECT_LE(b.z(), cell_center(o.z + 1, depth));
  }
}

TEST(Refine, RejectsReliableNonZEdge) {
  ReliabilityMesh bad = marching_cubes_flagged(sphere_fof(), 16);
  for (std::size_t v = 0; v < bad.reliable.size(); ++v) {
    if (!bad.reliable[v]) {
      bad.reliable[v] = 1;
      break;
    }
  }
  EXPECT_THROW(refine_z_crossings(bad, sphere_fof(), 16), PreconditionError);
}

class LaplacianRepair : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    flagged_ = new ReliabilityMesh(
        refine_z_crossings(marching_cubes_flagged(sphere_fof(), 48), sphere_fof(), 48));
  }
  static void TearDownTestSuite() {
    delete flagged_;
    flagged_ = nullptr;
  }
  static ReliabilityMesh* flagged_;
};

ReliabilityMesh* LaplacianRepair::flagged_ = nullptr;

TEST_F(LaplacianRepair, ReliableVerticesAreBitIdentical) {
  LaplacianReport report;
  const TriangleMesh out = solve_laplacian_constraint(*flagged_, &report);
  ASSERT_EQ(out.vertices.size(), flagged_->mesh.vertices.size());
  EXPECT_EQ(out.triangles, flagged_->mesh.triangles);
  for (std::size_t v = 0; v < out.vertices.size(); ++v) {
    if (flagged_->reliable[v]) {
      EXPECT_EQ(out.vertices[v].x(), flagged_->mesh.vertices[v].x());
      EXPECT_EQ(out.vertices[v].y(), flagged_->mesh.vertices[v].y());
      EXPECT_EQ(out.vertices[v].z(), flagged_->mesh.vertices[v].z());
    }
  }
  EXPECT_EQ(report.free_vertices, flagged_->mesh.vertices.size() - flagged_->reliable_count());
}

TEST_F(LaplacianRepair, EnergyStrictlyDecreases) {
  LaplacianReport report;
  const TriangleMesh out = solve_laplacian_constraint(*flagged_, &report);
  EXPECT_DOUBLE_EQ(report.energy_before, laplacian_energy(flagged_->mesh));
  EXPECT_NEAR(report.energy_after, laplacian_energy(out), 1e-9 * report.energy_before);
  EXPECT_LT(report.energy_after, report.energy_before);
  for (int axis = 0; axis < 3; ++axis) EXPECT_LE(report.relative_residual[axis], 1e-8);
}

TEST_F(LaplacianRepair, SolversAgree) {
  const TriangleMesh cg = solve_laplacian_constraint(*flagged_, nullptr, LaplacianSolver::kConjugateGradient);
  const TriangleMesh direct = solve_laplacian_constraint(*flagged_, nullptr, LaplacianSolver::kDirect);
  const TriangleMesh cgls = solve_laplacian_constraint(*flagged_, nullptr, LaplacianSolver::kCgls);
  double worst = 0.0;
  for (std::size_t v = 0; v < cg.vertices.size(); ++v) {
    worst = std::max(worst, (cg.vertices[v] - direct.vertices[v]).norm());
    worst = std::max(worst, (cgls.vertices[v] - direct.vertices[v]).norm());
  }
  EXPECT_LT(worst, 1e-5);
  EXPECT_NEAR(laplacian_energy(cg), laplacian_energy(direct), 1e-6 * laplacian_energy(direct));
}

TEST_F(LaplacianRepair, SmoothingMovesOnlyUnreliable) {
  const TriangleMesh out = smooth_unreliable(*flagged_, 3);
  for (std::size_t v = 0; v < out.vertices.size(); ++v) {
    if (flagged_->reliable[v]) EXPECT_EQ(out.vertices[v], flagged_->mesh.vertices[v]);
  }
  EXPECT_LT(laplacian_energy(out), laplacian_energy(flagged_->mesh));
  EXPECT_EQ(smooth_unreliable(*flagged_, 0).vertices, flagged_->mesh.vertices);
  EXPECT_THROW(smooth_unreliable(*flagged_, -1), DomainError);
}

TEST(LaplacianRepairIsolated, IsolatedComponentStaysPut) {
  ReliabilityMesh m;
  m.mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {5, 5, 5}, {6, 5, 5}, {5, 6, 5}};
  m.mesh.triangles = {{0, 1, 2}, {3, 4, 5}};
  m.reliable = {1, 1, 0, 0, 0, 0};
  m.origins.resize(6);
  LaplacianReport report;
  const TriangleMesh out = solve_laplacian_constraint(m, &report);
  EXPECT_EQ(report.isolated, 3u);
  for (int v = 3; v < 6; ++v) EXPECT_EQ(out.vertices[v], m.mesh.vertices[v]);
  EXPECT_LT(laplacian_energy(out), laplacian_energy(m.mesh));
}

TEST(FofToMesh, SphereRoundTripIsClose) {
  ExtractReport report;
  const TriangleMesh mesh = fof_to_mesh(sphere_fof(), {.depth = 48}, &report);
  EXPECT_EQ(euler_characteristic(mesh), 2);
  EXPECT_GT(signed_volume(mesh), 0.0);
  EXPECT_GT(report.reliable, 0u);
  EXPECT_EQ(report.vertices, mesh.vertices.size());
  double worst = 0.0;
  for (const Vec3& p : mesh.vertices) worst = std::max(worst, std::abs(p.norm() - 0.6));
  EXPECT_LT(worst, 0.05);
}

}  // namespace
}  // namespace fofx
