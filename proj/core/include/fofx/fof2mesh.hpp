#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fofx/field.hpp"
#include "fofx/geometry.hpp"

namespace fofx {

enum class EdgeAxis : std::uint8_t { kX = 0, kY = 1, kZ = 2 };

/// Grid edge a Marching Cubes vertex was created on, identified by its lower
/// sample (x, y, z) in unpadded sample indices (padding samples are -1 and
/// W / H / D) plus its axis.
struct EdgeOrigin {
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::int32_t z = 0;
  EdgeAxis axis = EdgeAxis::kX;
};

/// Marching Cubes output with a reliability flag per vertex. A vertex is
/// reliable when it lies on a grid edge parallel to z, where the FOF gives the
/// occupancy along the edge in closed form.
struct ReliabilityMesh {
  TriangleMesh mesh;
  std::vector<std::uint8_t> reliable;
  std::vector<EdgeOrigin> origins;

  std::size_t reliable_count() const;
};

/// Fills `row` (size (W+2)*(D+2), layout [x+1][z+1], border entries zero)
/// with the samples of pixel row y in [0, H). Padding rows are generated
/// internally.
using SampleRowFn = std::function<void(int y, std::span<double> row)>;

/// Streaming Marching Cubes over a W x H x D cell-centered sample grid padded
/// with one layer of zeros on every side. Vertices on shared edges are shared;
/// vertex ids follow cell-major order (y slowest, then x, then z). Inside is
/// value > iso; triangles are wound counter-clockwise seen from outside.
ReliabilityMesh marching_cubes(int width, int height, int depth, double iso,
                               const SampleRowFn& sample_row);

/// Marching Cubes on the FOF reconstruction sampled at D cell-centered z values.
/// Throws DomainError for D < 2.
ReliabilityMesh marching_cubes_flagged(const FofGrid& fof, int depth, double iso = 0.5);

struct RefineReport {
  std::size_t refined = 0;
  std::size_t no_sign_change = 0;  // kept linear z, flag cleared
};

/// Replaces the z of each reliable vertex by the root of f(z) - iso on its
/// z-edge (bracketed regula falsi, Illinois variant, to 1e-13). Vertices
/// whose edge shows no sign change keep their interpolated z and lose the
/// reliable flag.
ReliabilityMesh refine_z_crossings(const ReliabilityMesh& mesh, const FofGrid& fof, int depth,
                                   double iso = 0.5, RefineReport* report = nullptr);

// ---- Laplacian repair -------------------------------------------------------

/// Vertex graph of a mesh with a free (unreliable) set.
struct LaplacianSystem {
  std::vector<std::size_t> offsets;       // CSR over vertices
  std::vector<std::uint32_t> neighbors;   // sorted per vertex
  std::vector<std::uint8_t> free;         // 1 for vertices in U

  std::size_t vertex_count() const { return offsets.size() - 1; }
  std::size_t degree(std::size_t v) const { return offsets[v + 1] - offsets[v]; }

  /// out = (D - A) x
  void apply(std::span<const double> x, std::span<double> out) const;
};

LaplacianSystem build_laplacian(const TriangleMesh& mesh, std::span<const std::uint8_t> free);

/// ||(D - A) X||^2 summed over all vertices and the three axes.
double laplacian_energy(const TriangleMesh& mesh);

struct LaplacianReport {
  std::size_t free_vertices = 0;
  std::size_t isolated = 0;  // unreliable vertices with no path to a reliable one
  std::array<std::size_t, 3> iterations{};      // max over components; 0 when solved directly
  std::array<double, 3> relative_residual{};   // max over components of residual / ||A^T b||
  double energy_before = 0.0;
  double energy_after = 0.0;
};

enum class LaplacianSolver {
  kConjugateGradient,  // per component: LDL^T up to 4000 unknowns, else IC-CG, warm-started
  kDirect,             // per component: sparse LDL^T of L_U^T L_U
  kCgls,               // matrix-free CG on the whole normal equations, warm-started
};

/// Moves the unreliable vertices to minimize ||(D - A) X||^2 with reliable
/// vertices fixed: one least-squares problem per axis. Unreliable vertices
/// with no path to a reliable one stay where they are. The normal equations
/// split into independent blocks, one per connected set of unreliable
/// vertices, and the first two solvers treat each block on its own. Iterative
/// solves start from the input positions and stop at a normal-equation
/// residual of 1e-8 relative to ||L_U^T b|| or after 10|U| iterations.
/// Reliable vertices and connectivity are returned untouched.
TriangleMesh solve_laplacian_constraint(const ReliabilityMesh& mesh, LaplacianReport* report = nullptr,
                                        LaplacianSolver solver = LaplacianSolver::kConjugateGradient);

/// k rounds of uniform Laplacian smoothing applied to unreliable vertices only.
TriangleMesh smooth_unreliable(const ReliabilityMesh& mesh, int iterations);

// ---- full extraction --------------------------------------------------------

enum class RepairMode { kNone, kSmooth, kConstraint };

struct ExtractOptions {
  int depth = 256;
  double iso = 0.5;
  RepairMode repair = RepairMode::kConstraint;
  int smooth_iterations = 3;
};

struct ExtractReport {
  std::size_t vertices = 0;
  std::size_t reliable = 0;
  RefineReport refine;
  LaplacianReport laplacian;
};

TriangleMesh fof_to_mesh(const FofGrid& fof, const ExtractOptions& options = {},
                         ExtractReport* report = nullptr);

}  // namespace fofx
