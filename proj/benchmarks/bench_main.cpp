// Micro benchmarks for the conversion pipeline. Inputs are built once per
// benchmark outside the timed loop.

#include <benchmark/benchmark.h>

#include "fofx/basis.hpp"
#include "fofx/field.hpp"
#include "fofx/fof2mesh.hpp"
#include "fofx/mesh2fof.hpp"
#include "fofx/metrics.hpp"
#include "fofx/render.hpp"
#include "fofx/shapes.hpp"

namespace {

using namespace fofx;

const TriangleMesh& torus_mesh() {
  static const TriangleMesh mesh = torus(0.6, 0.25, 320, 160);
  return mesh;
}

const FofGrid& sphere_fof(int resolution) {
  static std::vector<std::pair<int, FofGrid>> cache;
  for (const auto& [r, fof] : cache) {
    if (r == resolution) return fof;
  }
  cache.emplace_back(resolution, mesh_to_fof(icosphere(0.6, 5), resolution, resolution, 128).fof);
  return cache.back().second;
}

void BM_MeshToFof(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  for (auto _ : state) {
    FofConversion c = mesh_to_fof(torus_mesh(), r, r, 128);
    benchmark::DoNotOptimize(c.fof.data().data());
  }
  state.counters["triangles"] = static_cast<double>(torus_mesh().triangles.size());
}
BENCHMARK(BM_MeshToFof)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_EvaluateField(benchmark::State& state) {
  const FofGrid& fof = sphere_fof(128);
  const CosineBasis basis = make_basis(fof.terms(), cell_centered_grid(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    OccupancyVolume v = evaluate_field(fof, basis);
    benchmark::DoNotOptimize(v.data.data());
  }
}
BENCHMARK(BM_EvaluateField)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_MarchingCubes(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  const FofGrid& fof = sphere_fof(r);
  for (auto _ : state) {
    ReliabilityMesh m = marching_cubes_flagged(fof, r);
    benchmark::DoNotOptimize(m.mesh.vertices.data());
  }
}
BENCHMARK(BM_MarchingCubes)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_RefineZ(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  const FofGrid& fof = sphere_fof(r);
  const ReliabilityMesh raw = marching_cubes_flagged(fof, r);
  for (auto _ : state) {
    ReliabilityMesh m = refine_z_crossings(raw, fof, r);
    benchmark::DoNotOptimize(m.mesh.vertices.data());
  }
}
BENCHMARK(BM_RefineZ)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Laplacian(benchmark::State& state) {
  const int r = 128;
  const FofGrid& fof = sphere_fof(r);
  const ReliabilityMesh refined = refine_z_crossings(marching_cubes_flagged(fof, r), fof, r);
  const auto solver = static_cast<LaplacianSolver>(state.range(0));
  for (auto _ : state) {
    TriangleMesh m = solve_laplacian_constraint(refined, nullptr, solver);
    benchmark::DoNotOptimize(m.vertices.data());
  }
}
BENCHMARK(BM_Laplacian)
    ->ArgName("solver")
    ->Arg(static_cast<int>(LaplacianSolver::kConjugateGradient))
    ->Arg(static_cast<int>(LaplacianSolver::kDirect))
    ->Arg(static_cast<int>(LaplacianSolver::kCgls))
    ->Unit(benchmark::kMillisecond);

void BM_Chamfer(benchmark::State& state) {
  const TriangleMesh a = icosphere(0.6, 5);
  const TriangleMesh b = torus(0.6, 0.25, 192, 96);
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(chamfer(a, b, count, 0));
}
BENCHMARK(BM_Chamfer)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_RenderNormalMap(benchmark::State& state) {
  const TriangleMesh mesh = icosphere(0.6, 5);
  for (auto _ : state) {
    NormalMapImage img = render_normal_map(mesh, 256, 256, 30.0);
    benchmark::DoNotOptimize(&img);
  }
}
BENCHMARK(BM_RenderNormalMap)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
