#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <queue>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "fofx/errors.hpp"
#include "fofx/fof2mesh.hpp"

namespace fofx {

void LaplacianSystem::apply(std::span<const double> x, std::span<double> out) const {
  const std::size_t n = vertex_count();
  for (std::size_t v = 0; v < n; ++v) {
    double acc = static_cast<double>(degree(v)) * x[v];
    for (std::size_t e = offsets[v]; e < offsets[v + 1]; ++e) acc -= x[neighbors[e]];
    out[v] = acc;
  }
}

LaplacianSystem build_laplacian(const TriangleMesh& mesh, std::span<const std::uint8_t> free) {
  const std::size_t n = mesh.vertices.size();
  if (free.size() != n) throw ShapeError("free-set flags must match the vertex count");
  const auto edges = unique_edges(mesh);
  LaplacianSystem sys;
  sys.offsets.assign(n + 1, 0);
  for (const auto& e : edges) {
    ++sys.offsets[e[0] + 1];
    ++sys.offsets[e[1] + 1];
  }
  std::partial_sum(sys.offsets.begin(), sys.offsets.end(), sys.offsets.begin());
  sys.neighbors.resize(sys.offsets.back());
  std::vector<std::size_t> cursor(sys.offsets.begin(), sys.offsets.end() - 1);
  for (const auto& e : edges) {
    sys.neighbors[cursor[e[0]]++] = e[1];
    sys.neighbors[cursor[e[1]]++] = e[0];
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(sys.neighbors.begin() + static_cast<std::ptrdiff_t>(sys.offsets[v]),
              sys.neighbors.begin() + static_cast<std::ptrdiff_t>(sys.offsets[v + 1]));
  }
  sys.free.assign(free.begin(), free.end());
  return sys;
}

namespace {

double energy_of(const LaplacianSystem& sys, const std::vector<Vec3>& vertices) {
  const std::size_t n = sys.vertex_count();
  std::vector<double> x(n), lx(n);
  double total = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    for (std::size_t v = 0; v < n; ++v) x[v] = vertices[v][axis];
    sys.apply(x, lx);
    for (double r : lx) total += r * r;
  }
  return total;
}

double norm_on(const std::vector<double>& v, const std::vector<std::uint32_t>& idx) {
  double s = 0.0;
  for (auto i : idx) s += v[i] * v[i];
  return std::sqrt(s);
}

}  // namespace

double laplacian_energy(const TriangleMesh& mesh) {
  const std::vector<std::uint8_t> none(mesh.vertices.size(), 0);
  return energy_of(build_laplacian(mesh, none), mesh.vertices);
}

namespace {

constexpr double kTolerance = 1e-8;

using Sparse = Eigen::SparseMatrix<double>;

// Components with at most this many unknowns are factorized directly; their
// normal matrices are tiny but often badly conditioned (few anchors).
constexpr std::size_t kDirectLimit = 4000;

// Normal-equation form of min ||L_U x_U - b|| with b = -L x_fixed, restricted
// to one connected component. The normal matrix is positive definite once
// every unknown is anchored to a fixed vertex.
struct NormalEquations {
  Sparse lu;      // columns of L for the unknowns
  Sparse normal;  // L_U^T L_U

  NormalEquations(const LaplacianSystem& sys, std::span<const std::uint32_t> unknowns) {
    // Column u of L holds degree(u) on the diagonal and -1 at each neighbour.
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(unknowns.size() * 8);
    for (std::size_t i = 0; i < unknowns.size(); ++i) {
      const auto u = unknowns[i];
      const auto col = static_cast<Eigen::Index>(i);
      entries.emplace_back(static_cast<Eigen::Index>(u), col, static_cast<double>(sys.degree(u)));
      for (std::size_t e = sys.offsets[u]; e < sys.offsets[u + 1]; ++e) {
        entries.emplace_back(static_cast<Eigen::Index>(sys.neighbors[e]), col, -1.0);
      }
    }
    lu.resize(static_cast<Eigen::Index>(sys.vertex_count()), static_cast<Eigen::Index>(unknowns.size()));
    lu.setFromTriplets(entries.begin(), entries.end());
    normal = (lu.transpose() * lu).pruned();
  }
};

// b = -L x_fixed per axis over the whole mesh, with every unknown zeroed.
std::array<Eigen::VectorXd, 3> fixed_rhs(const LaplacianSystem& sys, const std::vector<std::uint32_t>& unknowns,
                                         const std::vector<Vec3>& vertices) {
  const std::size_t n = sys.vertex_count();
  std::array<Eigen::VectorXd, 3> out;
  std::vector<double> fixed(n), lx(n);
  for (int axis = 0; axis < 3; ++axis) {
    for (std::size_t v = 0; v < n; ++v) fixed[v] = vertices[v][axis];
    for (auto u : unknowns) fixed[u] = 0.0;
    sys.apply(fixed, lx);
    out[static_cast<std::size_t>(axis)] = -Eigen::Map<const Eigen::VectorXd>(lx.data(), static_cast<Eigen::Index>(n));
  }
  return out;
}

// Unknowns grouped by connected component of the mesh graph, in vertex order.
std::vector<std::vector<std::uint32_t>> components_of(const LaplacianSystem& sys,
                                                      const std::vector<std::uint32_t>& unknowns) {
  const std::size_t n = sys.vertex_count();
  std::vector<std::int32_t> label(n, -1);
  std::int32_t count = 0;
  std::vector<std::uint32_t> stack;
  for (auto seed : unknowns) {
    if (label[seed] >= 0) continue;
    label[seed] = count;
    stack.push_back(seed);
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      for (std::size_t e = sys.offsets[v]; e < sys.offsets[v + 1]; ++e) {
        const auto w = sys.neighbors[e];
        if (label[w] < 0) {
          label[w] = count;
          stack.push_back(w);
        }
      }
    }
    ++count;
  }
  std::vector<std::vector<std::uint32_t>> groups(static_cast<std::size_t>(count));
  for (auto u : unknowns) groups[static_cast<std::size_t>(label[u])].push_back(u);
  return groups;
}

void record(LaplacianReport& report, int axis, std::size_t iterations, double residual) {
  const auto a = static_cast<std::size_t>(axis);
  report.iterations[a] = std::max(report.iterations[a], iterations);
  report.relative_residual[a] = std::max(report.relative_residual[a], residual);
}

double relative_residual(const Sparse& a, const Eigen::VectorXd& x, const Eigen::VectorXd& rhs) {
  const double reference = rhs.norm();
  return reference > 0.0 ? (a * x - rhs).norm() / reference : 0.0;
}

void solve_direct(const NormalEquations& eq, std::span<const std::uint32_t> unknowns,
                  const std::array<Eigen::VectorXd, 3>& b, std::vector<Vec3>& vertices, LaplacianReport& report) {
  Eigen::SimplicialLDLT<Sparse> ldlt(eq.normal);
  if (ldlt.info() != Eigen::Success) throw DegenerateInput("Laplacian normal matrix is singular");
  for (int axis = 0; axis < 3; ++axis) {
    const Eigen::VectorXd rhs = eq.lu.transpose() * b[static_cast<std::size_t>(axis)];
    const Eigen::VectorXd x = ldlt.solve(rhs);
    if (ldlt.info() != Eigen::Success || !x.allFinite()) throw DegenerateInput("Laplacian solve failed");
    record(report, axis, 0, relative_residual(eq.normal, x, rhs));
    for (std::size_t i = 0; i < unknowns.size(); ++i) vertices[unknowns[i]][axis] = x[static_cast<Eigen::Index>(i)];
  }
}

void solve_conjugate_gradient(const NormalEquations& eq, std::span<const std::uint32_t> unknowns,
                              const std::array<Eigen::VectorXd, 3>& b, std::vector<Vec3>& vertices,
                              LaplacianReport& report) {
  Eigen::ConjugateGradient<Sparse, Eigen::Lower | Eigen::Upper, Eigen::IncompleteCholesky<double, Eigen::Lower, Eigen::NaturalOrdering<int>>> cg;
  cg.setTolerance(kTolerance);
  cg.setMaxIterations(static_cast<Eigen::Index>(10 * unknowns.size()));
  cg.compute(eq.normal);
  if (cg.info() != Eigen::Success) throw DegenerateInput("Laplacian preconditioner failed");
  Eigen::VectorXd guess(static_cast<Eigen::Index>(unknowns.size()));
  for (int axis = 0; axis < 3; ++axis) {
    const Eigen::VectorXd rhs = eq.lu.transpose() * b[static_cast<std::size_t>(axis)];
    for (std::size_t i = 0; i < unknowns.size(); ++i) guess[static_cast<Eigen::Index>(i)] = vertices[unknowns[i]][axis];
    const Eigen::VectorXd x = cg.solveWithGuess(rhs, guess);
    if (!x.allFinite()) throw DegenerateInput("Laplacian solve failed");
    record(report, axis, static_cast<std::size_t>(cg.iterations()), relative_residual(eq.normal, x, rhs));
    for (std::size_t i = 0; i < unknowns.size(); ++i) vertices[unknowns[i]][axis] = x[static_cast<Eigen::Index>(i)];
  }
}

void solve_by_component(const LaplacianSystem& sys, const std::vector<std::uint32_t>& unknowns,
                        LaplacianSolver solver, std::vector<Vec3>& vertices, LaplacianReport& report) {
  const auto b = fixed_rhs(sys, unknowns, vertices);
  for (const auto& group : components_of(sys, unknowns)) {
    const NormalEquations eq(sys, group);
    if (solver == LaplacianSolver::kDirect || group.size() <= kDirectLimit) {
      solve_direct(eq, group, b, vertices, report);
    } else {
      solve_conjugate_gradient(eq, group, b, vertices, report);
    }
  }
}

void solve_cgls(const LaplacianSystem& sys, const std::vector<std::uint32_t>& unknowns, std::vector<Vec3>& vertices,
                LaplacianReport& report) {
  const std::size_t n = sys.vertex_count();
  const std::size_t max_iterations = 10 * unknowns.size();
  std::vector<double> x(n), r(n), s(n), q(n), p(n, 0.0), tmp(n);

  for (int axis = 0; axis < 3; ++axis) {
    for (std::size_t v = 0; v < n; ++v) x[v] = vertices[v][axis];

    // Reference ||A^T b|| with b = -L x_fixed.
    tmp = x;
    for (auto u : unknowns) tmp[u] = 0.0;
    sys.apply(tmp, r);
    for (double& value : r) value = -value;
    sys.apply(r, s);
    double reference = norm_on(s, unknowns);

    // Warm start from the current positions: r = b - A u = -L x.
    sys.apply(x, r);
    for (double& value : r) value = -value;
    sys.apply(r, s);
    std::fill(p.begin(), p.end(), 0.0);
    double gamma = 0.0;
    for (auto u : unknowns) {
      p[u] = s[u];
      gamma += s[u] * s[u];
    }
    if (reference == 0.0) reference = std::sqrt(gamma);

    std::size_t it = 0;
    while (it < max_iterations && std::sqrt(gamma) > kTolerance * reference) {
      sys.apply(p, q);
      double qq = 0.0;
      for (double value : q) qq += value * value;
      if (qq == 0.0) break;
      const double alpha = gamma / qq;
      for (auto u : unknowns) x[u] += alpha * p[u];
      for (std::size_t v = 0; v < n; ++v) r[v] -= alpha * q[v];
      sys.apply(r, s);
      double gamma_next = 0.0;
      for (auto u : unknowns) gamma_next += s[u] * s[u];
      const double beta = gamma_next / gamma;
      for (auto u : unknowns) p[u] = s[u] + beta * p[u];
      gamma = gamma_next;
      ++it;
    }
    report.iterations[static_cast<std::size_t>(axis)] = it;
    report.relative_residual[static_cast<std::size_t>(axis)] = reference > 0.0 ? std::sqrt(gamma) / reference : 0.0;
    for (auto u : unknowns) vertices[u][axis] = x[u];
  }
}

}  // namespace

TriangleMesh solve_laplacian_constraint(const ReliabilityMesh& input, LaplacianReport* report,
                                        LaplacianSolver solver) {
  const std::size_t n = input.mesh.vertices.size();
  if (input.reliable.size() != n) throw ShapeError("reliability flags must match the vertex count");

  std::vector<std::uint8_t> free(n);
  for (std::size_t v = 0; v < n; ++v) free[v] = input.reliable[v] ? 0 : 1;
  LaplacianSystem sys = build_laplacian(input.mesh, free);

  LaplacianReport local;
  local.energy_before = energy_of(sys, input.mesh.vertices);

  // Unreliable vertices without a path to a reliable one have no anchor.
  std::vector<std::uint8_t> anchored(n, 0);
  std::queue<std::uint32_t> frontier;
  for (std::size_t v = 0; v < n; ++v) {
    if (!free[v]) {
      anchored[v] = 1;
      frontier.push(static_cast<std::uint32_t>(v));
    }
  }
  while (!frontier.empty()) {
    const auto v = frontier.front();
    frontier.pop();
    for (std::size_t e = sys.offsets[v]; e < sys.offsets[v + 1]; ++e) {
      const auto w = sys.neighbors[e];
      if (!anchored[w]) {
        anchored[w] = 1;
        frontier.push(w);
      }
    }
  }
  std::vector<std::uint32_t> unknowns;
  for (std::size_t v = 0; v < n; ++v) {
    if (!free[v]) continue;
    if (anchored[v]) {
      unknowns.push_back(static_cast<std::uint32_t>(v));
    } else {
      ++local.isolated;
    }
  }
  local.free_vertices = unknowns.size();

  TriangleMesh out = input.mesh;
  if (!unknowns.empty()) {
    if (solver == LaplacianSolver::kCgls) {
      solve_cgls(sys, unknowns, out.vertices, local);
    } else {
      solve_by_component(sys, unknowns, solver, out.vertices, local);
    }
  }

  local.energy_after = energy_of(sys, out.vertices);
  if (report != nullptr) *report = local;
  return out;
}

TriangleMesh smooth_unreliable(const ReliabilityMesh& input, int iterations) {
  if (iterations < 0) throw DomainError("smoothing iterations must be >= 0");
  const std::size_t n = input.mesh.vertices.size();
  std::vector<std::uint8_t> free(n);
  for (std::size_t v = 0; v < n; ++v) free[v] = input.reliable[v] ? 0 : 1;
  const LaplacianSystem sys = build_laplacian(input.mesh, free);

  TriangleMesh out = input.mesh;
  std::vector<Vec3> next = out.vertices;
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t v = 0; v < n; ++v) {
      if (!free[v] || sys.degree(v) == 0) continue;
      Vec3 mean = Vec3::Zero();
      for (std::size_t e = sys.offsets[v]; e < sys.offsets[v + 1]; ++e) mean += out.vertices[sys.neighbors[e]];
      next[v] = mean / static_cast<double>(sys.degree(v));
    }
    out.vertices = next;
  }
  return out;
}

}  // namespace fofx
