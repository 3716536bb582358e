#include <cmath>

#include "fofx/basis.hpp"
#include "fofx/errors.hpp"
#include "fofx/fof2mesh.hpp"

namespace fofx {

namespace {

constexpr double kRootTolerance = 1e-13;
constexpr int kMaxRootSteps = 100;

// Root of g on [lo, hi] given g(lo) and g(hi) of opposite sign. The bracket
// always shrinks, so termination does not depend on the convergence rate.
template <class G>
double bracketed_root(G&& g, double lo, double hi, double g_lo, double g_hi) {
  int side = 0;
  for (int step = 0; step < kMaxRootSteps && hi - lo > kRootTolerance; ++step) {
    double z = (lo * g_hi - hi * g_lo) / (g_hi - g_lo);
    // Fall back to bisection when the secant leaves the bracket interior.
    if (!(z > lo && z < hi)) z = 0.5 * (lo + hi);
    const double gz = g(z);
    if (gz == 0.0) return z;
    if ((gz < 0.0) == (g_lo < 0.0)) {
      lo = z;
      g_lo = gz;
      if (side == -1) g_hi *= 0.5;
      side = -1;
    } else {
      hi = z;
      g_hi = gz;
      if (side == 1) g_lo *= 0.5;
      side = 1;
    }
  }
  return 0.5 * (lo + hi);
}

enum class RootStatus : std::uint8_t { kRefined, kNoSignChange };

}  // namespace

ReliabilityMesh refine_z_crossings(const ReliabilityMesh& input, const FofGrid& fof, int depth,
                                   double iso, RefineReport* report) {
  ReliabilityMesh out = input;
  const auto n = static_cast<std::ptrdiff_t>(out.mesh.vertices.size());
  for (std::ptrdiff_t v = 0; v < n; ++v) {
    if (out.reliable[v] && out.origins[v].axis != EdgeAxis::kZ) {
      throw PreconditionError("reliable vertex is not on a z-edge");
    }
  }
  std::vector<RootStatus> status(out.mesh.vertices.size(), RootStatus::kRefined);

#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t v = 0; v < n; ++v) {
    if (!out.reliable[v]) continue;
    const EdgeOrigin& o = out.origins[v];
    if (o.x < 0 || o.x >= fof.width() || o.y < 0 || o.y >= fof.height() || o.z < 0 || o.z + 1 >= depth) {
      // Edges touching the zero pad have no FOF column to refine against.
      status[v] = RootStatus::kNoSignChange;
      continue;
    }
    const auto coeffs = fof.coefficients(o.x, o.y);
    const auto g = [&](double z) { return cosine_series(coeffs, z) - iso; };
    const double lo = cell_center(o.z, depth);
    const double hi = cell_center(o.z + 1, depth);
    const double g_lo = g(lo);
    const double g_hi = g(hi);
    double root = 0.0;
    if (g_lo == 0.0 && g_hi == 0.0) {
      status[v] = RootStatus::kNoSignChange;
      continue;
    }
    if (g_lo == 0.0) {
      root = lo;
    } else if (g_hi == 0.0) {
      root = hi;
    } else if ((g_lo < 0.0) == (g_hi < 0.0)) {
      status[v] = RootStatus::kNoSignChange;
      continue;
    } else {
      root = bracketed_root(g, lo, hi, g_lo, g_hi);
    }
    out.mesh.vertices[v].z() = root;
  }

  RefineReport local;
  for (std::ptrdiff_t v = 0; v < n; ++v) {
    if (!out.reliable[v]) continue;
    if (status[v] == RootStatus::kNoSignChange) {
      out.reliable[v] = 0;
      ++local.no_sign_change;
    } else {
      ++local.refined;
    }
  }
  if (report != nullptr) *report = local;
  return out;
}

TriangleMesh fof_to_mesh(const FofGrid& fof, const ExtractOptions& options, ExtractReport* report) {
  ExtractReport local;
  ReliabilityMesh flagged = marching_cubes_flagged(fof, options.depth, options.iso);
  flagged = refine_z_crossings(flagged, fof, options.depth, options.iso, &local.refine);
  local.vertices = flagged.mesh.vertices.size();
  local.reliable = flagged.reliable_count();

  TriangleMesh result;
  switch (options.repair) {
    case RepairMode::kNone:
      result = std::move(flagged.mesh);
      break;
    case RepairMode::kSmooth:
      result = smooth_unreliable(flagged, options.smooth_iterations);
      break;
    case RepairMode::kConstraint:
      result = solve_laplacian_constraint(flagged, &local.laplacian);
      break;
  }
  if (report != nullptr) *report = local;
  return result;
}

}  // namespace fofx
