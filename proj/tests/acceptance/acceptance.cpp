// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria (0 when everything holds).

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fofx/experiments.hpp"
#include "fofx/fof2mesh.hpp"
#include "fofx/mesh2fof.hpp"
#include "fofx/metrics.hpp"
#include "fofx/render.hpp"
#include "fofx/shapes.hpp"

namespace {

using namespace fofx;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) { return format_number(v); }

std::string join(const std::vector<double>& values) {
  std::string s;
  for (double v : values) s += (s.empty() ? "" : " ") + fmt(v);
  return s;
}

double seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---- 1: coefficient oracle ---------------------------------------------------

constexpr int kTerms = 128;
using TermVector = std::array<double, kTerms>;

// Vector-valued adaptive Simpson over all cos(t_n (z+1)) at once; the error
// test uses the largest component.
class CosineQuadrature {
 public:
  explicit CosineQuadrature(double tol) : tol_(tol) {}

  TermVector integrate(double a, double b) const {
    TermVector total{};
    // Panels shorter than a quarter period of the highest term, so that the
    // first Simpson estimate on each cannot alias.
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) * kTerms)));
    for (int k = 0; k < panels; ++k) {
      const double lo = a + (b - a) * k / panels;
      const double hi = k + 1 == panels ? b : a + (b - a) * (k + 1) / panels;
      const TermVector flo = eval(lo);
      const TermVector fhi = eval(hi);
      const TermVector fmid = eval(0.5 * (lo + hi));
      const TermVector part = recurse(lo, hi, flo, fmid, fhi, simpson(lo, hi, flo, fmid, fhi), tol_ / panels, 40);
      for (int n = 0; n < kTerms; ++n) total[n] += part[n];
    }
    return total;
  }

 private:
  // cos(n t) by the Chebyshev recurrence; the rounding error stays near
  // n^2 * 1e-16, far below the tolerance.
  static TermVector eval(double z) {
    TermVector f;
    const double c1 = std::cos(std::numbers::pi / 2.0 * (z + 1.0));
    f[0] = 1.0;
    f[1] = c1;
    for (int n = 2; n < kTerms; ++n) f[n] = 2.0 * c1 * f[n - 1] - f[n - 2];
    return f;
  }
  static TermVector simpson(double lo, double hi, const TermVector& a, const TermVector& m, const TermVector& b) {
    TermVector s;
    for (int n = 0; n < kTerms; ++n) s[n] = (hi - lo) / 6.0 * (a[n] + 4.0 * m[n] + b[n]);
    return s;
  }
  TermVector recurse(double lo, double hi, const TermVector& flo, const TermVector& fmid, const TermVector& fhi,
                     const TermVector& whole, double eps, int depth) const {
    const double mid = 0.5 * (lo + hi);
    const TermVector flm = eval(0.5 * (lo + mid));
    const TermVector frm = eval(0.5 * (mid + hi));
    const TermVector left = simpson(lo, mid, flo, flm, fmid);
    const TermVector right = simpson(mid, hi, fmid, frm, fhi);
    double err = 0.0;
    for (int n = 0; n < kTerms; ++n) err = std::max(err, std::abs(left[n] + right[n] - whole[n]));
    if (depth <= 0 || err <= 15.0 * eps) {
      TermVector out;
      for (int n = 0; n < kTerms; ++n) out[n] = left[n] + right[n] + (left[n] + right[n] - whole[n]) / 15.0;
      return out;
    }
    const TermVector l = recurse(lo, mid, flo, flm, fmid, left, eps / 2.0, depth - 1);
    const TermVector r = recurse(mid, hi, fmid, frm, fhi, right, eps / 2.0, depth - 1);
    TermVector out;
    for (int n = 0; n < kTerms; ++n) out[n] = l[n] + r[n];
    return out;
  }

  double tol_;
};

Outcome coefficient_oracle() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> k_dist(1, 3);
  const CosineQuadrature quad(1e-9);
  double worst = 0.0;
  for (int set = 0; set < 1000; ++set) {
    const int k = k_dist(rng);
    std::vector<double> ends(static_cast<std::size_t>(2 * k));
    for (double& e : ends) e = u(rng);
    std::sort(ends.begin(), ends.end());
    std::vector<RasterEvent> events;
    for (std::size_t i = 0; i < ends.size(); ++i) {
      events.push_back({ends[i], i % 2 == 0 ? Orientation::kEnter : Orientation::kExit});
    }
    std::vector<double> analytic(kTerms);
    integrate_pixel(events, analytic);
    TermVector numeric{};
    for (int i = 0; i < k; ++i) {
      const TermVector part = quad.integrate(ends[2 * i], ends[2 * i + 1]);
      for (int n = 0; n < kTerms; ++n) numeric[n] += part[n];
    }
    for (int n = 0; n < kTerms; ++n) worst = std::max(worst, std::abs(analytic[n] - numeric[n]));
  }
  return {worst < 1e-9, "max |analytic - quadrature| = " + fmt(worst)};
}

// ---- 2: automaton -------------------------------------------------------------

std::vector<RasterEvent> reference_match(const std::vector<RasterEvent>& in) {
  const int n = static_cast<int>(in.size());
  std::vector<int> best;
  for (unsigned subset = 0; subset < (1u << n); ++subset) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      if (subset & (1u << i)) idx.push_back(i);
    }
    bool ok = idx.size() % 2 == 0;
    for (std::size_t j = 0; ok && j < idx.size(); ++j) {
      ok = in[static_cast<std::size_t>(idx[j])].orientation == (j % 2 == 0 ? Orientation::kEnter : Orientation::kExit);
    }
    if (ok && (idx.size() > best.size() || (idx.size() == best.size() && idx < best))) best = idx;
  }
  std::vector<RasterEvent> out;
  for (int i : best) out.push_back(in[static_cast<std::size_t>(i)]);
  return out;
}

Outcome automaton_exhaustive() {
  int strings = 0;
  int failures = 0;
  for (int length = 0; length <= 8; ++length) {
    for (unsigned bits = 0; bits < (1u << length); ++bits) {
      std::vector<RasterEvent> in;
      for (int i = 0; i < length; ++i) {
        in.push_back({-0.9 + 0.2 * i, (bits >> i) & 1u ? Orientation::kExit : Orientation::kEnter});
      }
      const auto out = match_sequence(in);
      bool ok = out.size() % 2 == 0;
      for (std::size_t i = 0; ok && i < out.size(); ++i) {
        ok = out[i].orientation == (i % 2 == 0 ? Orientation::kEnter : Orientation::kExit);
      }
      ok = ok && match_sequence(out) == out && out == reference_match(in);
      ++strings;
      if (!ok) ++failures;
    }
  }
  return {failures == 0, std::to_string(strings) + " strings, " + std::to_string(failures) + " mismatches"};
}

// ---- 3: sphere round trip -----------------------------------------------------

constexpr double kSphereFloor = 1.0715e-3;
constexpr double kSphereThreshold = 1.5 * kSphereFloor;

Outcome sphere_round_trip() {
  const double r = 0.6;
  const FofGrid fof = mesh_to_fof(icosphere(r, 5), 256, 256, 128).fof;
  const TriangleMesh mesh = fof_to_mesh(fof, {.depth = 256, .repair = RepairMode::kConstraint});
  if (mesh.empty()) return {false, "empty extraction"};

  const std::size_t count = 200000;
  const SampledSurface on_mesh = sample_surface(mesh, count, 0);
  double mesh_to_sphere = 0.0;
  for (const Vec3& p : on_mesh.points) mesh_to_sphere += std::abs(p.norm() - r);
  std::mt19937_64 rng(derived_seed(0));
  std::normal_distribution<double> g;
  std::vector<Vec3> on_sphere(count);
  for (Vec3& p : on_sphere) {
    p = Vec3(g(rng), g(rng), g(rng));
    p *= r / p.norm();
  }
  const MeshDistance dist(mesh);
  std::vector<double> d(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
    d[static_cast<std::size_t>(i)] = dist.distance(on_sphere[static_cast<std::size_t>(i)]);
  }
  double sphere_to_mesh = 0.0;
  for (double v : d) sphere_to_mesh += v;
  const double c = 0.5 * mesh_to_sphere / count + 0.5 * sphere_to_mesh / count;
  return {c < kSphereThreshold, "chamfer " + fmt(c) + " < " + fmt(kSphereThreshold) + " (1.5x voxel floor)"};
}

// ---- 4-6: sweeps --------------------------------------------------------------

RoundTripConfig base_config() {
  RoundTripConfig c;
  c.resolution = 256;
  c.terms = 128;
  c.depth = 256;
  c.samples = 100000;
  c.seed = 0;
  return c;
}

std::vector<double> chamfers(const std::vector<SweepRow>& rows) {
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.chamfer);
  return v;
}

Outcome n_sweep_trend() {
  const std::vector<int> terms = {8, 16, 32, 64, 128, 256};
  bool pass = true;
  std::string detail;
  const std::pair<const char*, TriangleMesh> meshes[] = {{"sphere", icosphere(0.6, 5)},
                                                         {"torus", torus(0.6, 0.25, 192, 96)}};
  for (const auto& [name, mesh] : meshes) {
    const auto c = chamfers(n_sweep(mesh, terms, base_config()));
    bool decreasing = true;
    for (std::size_t i = 1; i < c.size(); ++i) decreasing = decreasing && c[i] < c[i - 1];
    const double ratio = c[0] / c[4];
    pass = pass && decreasing && ratio > 10.0;
    detail += std::string(detail.empty() ? "" : "; ") + name + " [" + join(c) + "] N8/N128 = " + fmt(ratio);
  }
  return {pass, detail};
}

Outcome res_sweep_trend() {
  const auto rows = res_sweep(icosphere(0.6, 5), {32, 64, 128, 256}, base_config());
  const auto c = chamfers(rows);
  bool pass = true;
  for (std::size_t i = 1; i < c.size(); ++i) pass = pass && c[i] < 0.7 * c[i - 1];
  return {pass, "r=32..256 [" + join(c) + "]"};
}

Outcome noise_sweep_trend() {
  const auto c = chamfers(noise_sweep(icosphere(0.6, 5), {0, 5, 10, 15, 20, 25, 30}, base_config(), 0, 3));
  bool pass = true;
  for (std::size_t i = 1; i < c.size(); ++i) pass = pass && c[i] >= c[i - 1];
  pass = pass && c[1] <= 1.2 * c[0];
  return {pass, "0..30% [" + join(c) + "]"};
}

// ---- 7: non-watertight robustness --------------------------------------------

// Share of covered clean pixels whose open-mesh a_0 does not exceed the clean
// a_0 by more than 0.05.
double no_floating_mass_share(const FofGrid& clean, const FofGrid& open) {
  std::size_t covered = 0;
  std::size_t ok = 0;
  for (std::size_t p = 0; p < clean.pixel_count(); ++p) {
    const double a0 = clean.pixel(p)[0];
    if (a0 <= 0.0) continue;
    ++covered;
    if (open.pixel(p)[0] <= a0 + 0.05) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(covered);
}

Outcome open_sphere_robustness() {
  const FofGrid clean = mesh_to_fof(icosphere(0.6, 4), 256, 256, 128).fof;
  const TriangleMesh open = open_sphere(0.6, 4, 0.1, 0);
  const double with = no_floating_mass_share(clean, mesh_to_fof(open, 256, 256, 128, MatchPolicy::kAutomaton).fof);
  const double without = no_floating_mass_share(clean, mesh_to_fof(open, 256, 256, 128, MatchPolicy::kDisabled).fof);
  return {with >= 0.99 && without < 0.99,
          "automaton " + fmt(100.0 * with) + "% of pixels, disabled " + fmt(100.0 * without) + "%"};
}

// ---- 8: Laplacian repair -------------------------------------------------------

Outcome laplacian_repair() {
  const TriangleMesh truth = cylinder(0.45, 0.7, 96, 24);
  const int res = 64;
  const FofGrid fof = mesh_to_fof(truth, res, res, 16).fof;
  const ReliabilityMesh flagged = refine_z_crossings(marching_cubes_flagged(fof, res), fof, res);
  LaplacianReport report;
  const TriangleMesh repaired = solve_laplacian_constraint(flagged, &report);
  const TriangleMesh& raw = flagged.mesh;

  bool identical = repaired.triangles == raw.triangles;
  for (std::size_t v = 0; v < raw.vertices.size(); ++v) {
    if (!flagged.reliable[v]) continue;
    for (int k = 0; k < 3; ++k) identical = identical && repaired.vertices[v][k] == raw.vertices[v][k];
  }
  const bool energy = report.energy_after < report.energy_before;
  const double ch_raw = chamfer(raw, truth, 100000, 0);
  const double ch_rep = chamfer(repaired, truth, 100000, 0);
  const auto truth_maps = render_normal_maps(truth, 256, 256);
  const double ssim_raw = psnr_ssim(render_normal_maps(raw, 256, 256), truth_maps).ssim;
  const double ssim_rep = psnr_ssim(render_normal_maps(repaired, 256, 256), truth_maps).ssim;
  std::ostringstream d;
  d << "reliable identical " << (identical ? "yes" : "no") << ", energy " << fmt(report.energy_before) << " -> "
    << fmt(report.energy_after) << ", chamfer " << fmt(ch_raw) << " -> " << fmt(ch_rep) << ", SSIM "
    << fmt(ssim_raw) << " -> " << fmt(ssim_rep);
  return {identical && energy && ch_rep <= 1.05 * ch_raw && ssim_rep > ssim_raw, d.str()};
}

// ---- 9: performance -------------------------------------------------------------

Outcome performance() {
  const TriangleMesh big = torus(0.6, 0.25, 320, 160);
  auto start = Clock::now();
  const FofGrid fof512 = mesh_to_fof(big, 512, 512, 128).fof;
  const double convert = seconds(start);

  const TriangleMesh sphere = icosphere(0.6, 5);
  start = Clock::now();
  const FofGrid fof = mesh_to_fof(sphere, 256, 256, 128).fof;
  const TriangleMesh back = fof_to_mesh(fof, {.depth = 256});
  const double round_trip = seconds(start);
  std::ostringstream d;
  d << big.triangles.size() << " triangles -> 512^2 x 128 in " << fmt(convert) << " s; 256 round trip in "
    << fmt(round_trip) << " s (" << back.triangles.size() << " triangles)";
  return {convert < 1.0 && round_trip < 2.0 && fof512.pixel_count() > 0 && !back.empty(), d.str()};
}

// ---- 10: metric self-consistency ----------------------------------------------

Outcome metric_self_consistency() {
  const TriangleMesh a = torus(0.6, 0.25, 64, 32);
  const double self_chamfer = chamfer(a, a, 100000, 0);
  const double self_p2s = p2s(a, a, 100000, 0);
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  double worst = 0.0;
  for (int pair = 0; pair < 100; ++pair) {
    const TriangleMesh m = open_sphere(0.3 + 0.004 * pair, 2, 0.25, static_cast<std::uint64_t>(pair));
    const Vec3 p(u(rng), u(rng), u(rng));
    worst = std::max(worst, std::abs(point_to_surface(p, m) - point_to_surface_brute_force(p, m)));
  }
  const auto maps = render_normal_maps(a, 128, 128);
  const double mse = normal_difference(maps, maps);
  std::ostringstream d;
  d << "chamfer(A,A) " << fmt(self_chamfer) << ", p2s(A,A) " << fmt(self_p2s) << ", BVH vs brute force "
    << fmt(worst) << ", normal MSE " << fmt(mse);
  return {self_chamfer < 1e-9 && self_p2s < 1e-9 && worst <= 1e-9 && mse == 0.0, d.str()};
}

}  // namespace

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
  double budget_seconds;  // 0 when the criterion states no runtime bound
};

// Optional arguments select criteria by number, e.g. `fofx_acceptance 1 8`.
int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"coefficient oracle", coefficient_oracle, 10.0},
      {"automaton exhaustive check", automaton_exhaustive, 1.0},
      {"sphere round trip", sphere_round_trip, 60.0},
      {"N-sweep trend", n_sweep_trend, 0.0},
      {"resolution-sweep trend", res_sweep_trend, 0.0},
      {"noise-sweep trend", noise_sweep_trend, 0.0},
      {"non-watertight robustness", open_sphere_robustness, 0.0},
      {"Laplacian repair", laplacian_repair, 0.0},
      {"performance", performance, 0.0},
      {"metric self-consistency", metric_self_consistency, 0.0},
  };
  std::vector<bool> selected(criteria.size(), argc <= 1);
  for (int a = 1; a < argc; ++a) {
    const int k = std::atoi(argv[a]);
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "unknown criterion '%s'\n", argv[a]);
      return 255;
    }
    selected[static_cast<std::size_t>(k - 1)] = true;
  }

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected[i]) continue;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double t = seconds(start);
    if (criteria[i].budget_seconds > 0.0 && t >= criteria[i].budget_seconds) {
      o.pass = false;
      o.detail += ", over the " + fmt(criteria[i].budget_seconds) + " s budget";
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2zu %-28s %s  [%.2f s]  %s\n", i + 1, criteria[i].name, o.pass ? "PASS" : "FAIL", t,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
