#include <algorithm>
#include <random>

#include "fofx/errors.hpp"
#include "fofx/metrics.hpp"

namespace fofx {

SampledSurface sample_surface(const TriangleMesh& mesh, std::size_t count, std::uint64_t seed) {
  if (mesh.triangles.empty()) throw EmptyInput("cannot sample an empty mesh");
  if (count == 0) throw DomainError("sample count must be at least 1");
  mesh.validate();

  std::vector<double> cumulative(mesh.triangles.size());
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    total += triangle_area(mesh, t);
    cumulative[t] = total;
  }
  if (!(total > 0.0)) throw DegenerateInput("mesh has zero surface area");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SampledSurface out;
  out.points.reserve(count);
  out.triangles.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double pick = unit(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    if (it == cumulative.end()) --it;
    const auto t = static_cast<std::uint32_t>(it - cumulative.begin());
    double r1 = unit(rng);
    double r2 = unit(rng);
    if (r1 + r2 > 1.0) {
      r1 = 1.0 - r1;
      r2 = 1.0 - r2;
    }
    const auto& tri = mesh.triangles[t];
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    out.points.push_back(a + r1 * (b - a) + r2 * (c - a));
    out.triangles.push_back(t);
  }
  return out;
}

double mean_surface_distance(const SampledSurface& samples, const MeshDistance& target) {
  if (samples.points.empty()) throw EmptyInput("no samples");
  const auto n = static_cast<std::ptrdiff_t>(samples.points.size());
  std::vector<double> d(samples.points.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) d[i] = target.distance(samples.points[i]);
  // Sequential sum keeps results independent of the thread count.
  double sum = 0.0;
  for (double v : d) sum += v;
  return sum / static_cast<double>(d.size());
}

std::uint64_t derived_seed(std::uint64_t seed) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double chamfer(const TriangleMesh& a, const TriangleMesh& b, std::size_t count,
               std::uint64_t seed_a, std::uint64_t seed_b) {
  const MeshDistance to_a(a);
  const MeshDistance to_b(b);
  const double ab = mean_surface_distance(sample_surface(a, count, seed_a), to_b);
  const double ba = mean_surface_distance(sample_surface(b, count, seed_b), to_a);
  return 0.5 * ab + 0.5 * ba;
}

double chamfer(const TriangleMesh& a, const TriangleMesh& b, std::size_t count, std::uint64_t seed) {
  return chamfer(a, b, count, seed, derived_seed(seed));
}

double p2s(const TriangleMesh& predicted, const TriangleMesh& ground_truth, std::size_t count,
           std::uint64_t seed) {
  const MeshDistance to_gt(ground_truth);
  return mean_surface_distance(sample_surface(predicted, count, seed), to_gt);
}

}  // namespace fofx
