#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fofx/errors.hpp"
#include "fofx/mesh2fof.hpp"
#include "fofx/shapes.hpp"
#include "support.hpp"

namespace fofx {
namespace {

std::vector<RasterEvent> events_from_bits(unsigned bits, int length) {
  std::vector<RasterEvent> ev;
  for (int i = 0; i < length; ++i) {
    ev.push_back({-0.9 + 0.2 * i, (bits >> i) & 1u ? Orientation::kExit : Orientation::kEnter});
  }
  return ev;
}

// Among all alternating Enter/Exit subsequences, the longest one; ties go to
// the lexicographically smallest index sequence.
std::vector<RasterEvent> reference_match(const std::vector<RasterEvent>& in) {
  const int n = static_cast<int>(in.size());
  std::vector<int> best;
  bool have_best = false;
  for (unsigned subset = 0; subset < (1u << n); ++subset) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      if (subset & (1u << i)) idx.push_back(i);
    }
    bool ok = idx.size() % 2 == 0;
    for (std::size_t k = 0; ok && k < idx.size(); ++k) {
      ok = in[static_cast<std::size_t>(idx[k])].orientation ==
           (k % 2 == 0 ? Orientation::kEnter : Orientation::kExit);
    }
    if (!ok) continue;
    if (!have_best || idx.size() > best.size() || (idx.size() == best.size() && idx < best)) {
      best = idx;
      have_best = true;
    }
  }
  std::vector<RasterEvent> out;
  for (int i : best) out.push_back(in[static_cast<std::size_t>(i)]);
  return out;
}

bool alternates(const std::vector<RasterEvent>& ev) {
  if (ev.size() % 2 != 0) return false;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (ev[i].orientation != (i % 2 == 0 ? Orientation::kEnter : Orientation::kExit)) return false;
  }
  return true;
}

std::string symbols(const std::vector<RasterEvent>& ev) {
  std::string s;
  for (const auto& e : ev) s += e.orientation == Orientation::kEnter ? '0' : '1';
  return s;
}

std::vector<RasterEvent> parse(const std::string& s) {
  std::vector<RasterEvent> ev;
  for (std::size_t i = 0; i < s.size(); ++i) {
    ev.push_back({-0.5 + 0.1 * static_cast<double>(i), s[i] == '0' ? Orientation::kEnter : Orientation::kExit});
  }
  return ev;
}

TEST(Matcher, ReferenceExamples) {
  EXPECT_EQ(symbols(match_sequence(parse("0101"))), "0101");
  EXPECT_EQ(symbols(match_sequence(parse("101"))), "01");
  const auto dup = parse("0011");
  const auto out = match_sequence(dup);
  ASSERT_EQ(symbols(out), "01");
  EXPECT_EQ(out[0], dup[0]);
  EXPECT_EQ(out[1], dup[2]);
  EXPECT_TRUE(match_sequence(parse("000")).empty());
  EXPECT_TRUE(match_sequence(parse("")).empty());
}

TEST(Matcher, ExhaustiveAgainstReference) {
  for (int length = 0; length <= 8; ++length) {
    for (unsigned bits = 0; bits < (1u << length); ++bits) {
      const auto in = events_from_bits(bits, length);
      const auto out = match_sequence(in);
      ASSERT_TRUE(alternates(out)) << symbols(in);
      ASSERT_EQ(match_sequence(out), out) << symbols(in);
      ASSERT_EQ(out, reference_match(in)) << symbols(in);
    }
  }
}

TEST(Matcher, TableIsComplete) {
  for (auto s : {MatcherState::kOutside, MatcherState::kInside}) {
    for (auto sym : {MatcherSymbol::kEnter, MatcherSymbol::kExit, MatcherSymbol::kStop}) {
      const auto& t = matcher_step(s, sym);
      EXPECT_EQ(t.from, s);
      EXPECT_EQ(t.symbol, sym);
    }
  }
}

TEST(Matcher, UnsortedPixelIsPreconditionError) {
  const auto buffer = IntervalBuffer::from_lists(
      1, 1, {{{0.5, Orientation::kEnter}, {0.1, Orientation::kExit}}});
  EXPECT_THROW(match_discontinuities(buffer), PreconditionError);
}

TEST(Matcher, ReportCountsDrops) {
  const auto buffer = IntervalBuffer::from_lists(1, 2, {parse("0011"), parse("01")});
  const auto result = match_discontinuities(buffer);
  EXPECT_EQ(result.report.pixels_total, 2u);
  EXPECT_EQ(result.report.pixels_modified, 1u);
  EXPECT_EQ(result.report.events_dropped, 2u);
  EXPECT_TRUE(result.buffer.matched());
}

TEST(PairWithoutMatcher, RelabelsBlindly) {
  const auto buffer = IntervalBuffer::from_lists(1, 1, {parse("110")});
  const auto paired = pair_without_matcher(buffer);
  const auto ev = paired.events(0);
  ASSERT_EQ(ev.size(), 4u);
  EXPECT_EQ(ev[0].orientation, Orientation::kEnter);
  EXPECT_EQ(ev[3].depth, 1.0);
  EXPECT_TRUE(paired.matched());
}

TEST(Rasterize, FacingTriangleGivesOneEnter) {
  TriangleMesh tri;
  tri.vertices = {{-0.9, -0.9, 0.2}, {0.9, -0.9, 0.2}, {-0.9, 0.9, 0.2}};
  tri.triangles = {{0, 2, 1}};
  ASSERT_LT(face_normal(tri, 0).z(), 0.0);
  const auto buffer = rasterize_events(tri, 4, 4);
  // Pixel (0, 0) is centered at (-0.75, -0.75), well inside.
  const auto ev = buffer.events(0, 0);
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].orientation, Orientation::kEnter);
  EXPECT_DOUBLE_EQ(ev[0].depth, 0.2);
  // Pixel (3, 3) at (0.75, 0.75) is outside.
  EXPECT_TRUE(buffer.events(3, 3).empty());
}

TEST(Rasterize, SharedEdgeReportsOnce) {
  // The diagonal of this quad passes exactly through the centers of the
  // diagonal pixels of an even grid.
  const TriangleMesh quad = test::square(1.0, 0.0);
  const int n = 8;
  const auto buffer = rasterize_events(quad, n, n);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) EXPECT_EQ(buffer.events(x, y).size(), 1u) << x << "," << y;
  }
}

TEST(Rasterize, CubeMatchesRayIntersections) {
  const double h = 0.55;
  const TriangleMesh box = cube(h, 3);
  const int n = 40;
  RasterStats stats;
  const auto buffer = rasterize_events(box, n, n, &stats);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const double px = cell_center(x, n);
      const double py = cell_center(y, n);
      const auto ev = buffer.events(x, y);
      if (std::abs(px) < h && std::abs(py) < h) {
        ASSERT_EQ(ev.size(), 2u);
        EXPECT_EQ(ev[0].orientation, Orientation::kEnter);
        EXPECT_NEAR(ev[0].depth, -h, 1e-12);
        EXPECT_EQ(ev[1].orientation, Orientation::kExit);
        EXPECT_NEAR(ev[1].depth, h, 1e-12);
      } else {
        EXPECT_TRUE(ev.empty());
      }
    }
  }
  // The four side faces are parallel to z.
  EXPECT_EQ(stats.triangles_skipped, 4u * 9u * 2u);
}

TEST(Rasterize, WatertightMeshesNeedNoMatching) {
  for (const auto& mesh : {cube(0.7, 2), icosphere(0.6, 3)}) {
    const auto raw = rasterize_events(mesh, 64, 64);
    EXPECT_TRUE(raw.matched());
    const auto result = match_discontinuities(raw);
    EXPECT_EQ(result.report.pixels_modified, 0u);
    for (std::size_t p = 0; p < raw.pixel_count(); ++p) {
      const auto a = raw.events(p);
      const auto b = result.buffer.events(p);
      ASSERT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
    }
  }
}

TEST(Rasterize, IndependentOfTriangleOrder) {
  const TriangleMesh mesh = icosphere(0.6, 3);
  TriangleMesh shuffled = mesh;
  std::mt19937_64 rng(7);
  std::shuffle(shuffled.triangles.begin(), shuffled.triangles.end(), rng);
  const auto a = rasterize_events(mesh, 48, 48);
  const auto b = rasterize_events(shuffled, 48, 48);
  for (std::size_t p = 0; p < a.pixel_count(); ++p) {
    const auto ea = a.events(p);
    const auto eb = b.events(p);
    ASSERT_TRUE(std::equal(ea.begin(), ea.end(), eb.begin(), eb.end()));
  }
}

TEST(Rasterize, EqualDepthSortsEnterFirst) {
  const TriangleMesh front = test::square(0.5, 0.1, true);
  const TriangleMesh back = test::square(0.5, 0.1, false);
  const auto buffer = rasterize_events(test::merged(back, front), 4, 4);
  const auto ev = buffer.events(1, 1);
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_EQ(ev[0].orientation, Orientation::kEnter);
  EXPECT_EQ(ev[1].orientation, Orientation::kExit);
}

TEST(Rasterize, ClampsOutOfRangeDepth) {
  RasterStats stats;
  const auto buffer = rasterize_events(test::square(0.5, 1.2), 4, 4, &stats);
  EXPECT_EQ(buffer.events(1, 1)[0].depth, 1.0);
  EXPECT_EQ(stats.events_clamped, 4u);
}

TEST(Integrate, EmptyAndFullInterval) {
  std::vector<double> out(16, 3.0);
  integrate_pixel({}, out);
  for (double v : out) EXPECT_EQ(v, 0.0);
  const std::vector<RasterEvent> full{{-1.0, Orientation::kEnter}, {1.0, Orientation::kExit}};
  integrate_pixel(full, out);
  EXPECT_EQ(out[0], 2.0);
  for (std::size_t n = 1; n < out.size(); ++n) EXPECT_NEAR(out[n], 0.0, 1e-14);
}

TEST(Integrate, HalfIntervalFirstTerm) {
  const std::vector<RasterEvent> ev{{0.0, Orientation::kEnter}, {0.5, Orientation::kExit}};
  std::vector<double> out(2);
  integrate_pixel(ev, out);
  EXPECT_DOUBLE_EQ(out[0], 0.5);
  EXPECT_NEAR(out[1], -0.18646161428902824, 1e-12);
}

TEST(Integrate, MatchesQuadrature) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> k_dist(1, 3);
  const int terms = 128;
  for (int trial = 0; trial < 25; ++trial) {
    const int k = k_dist(rng);
    std::vector<double> ends(static_cast<std::size_t>(2 * k));
    for (double& e : ends) e = u(rng);
    std::sort(ends.begin(), ends.end());
    std::vector<RasterEvent> ev;
    for (std::size_t i = 0; i < ends.size(); ++i) {
      ev.push_back({ends[i], i % 2 == 0 ? Orientation::kEnter : Orientation::kExit});
    }
    std::vector<double> out(terms);
    integrate_pixel(ev, out);
    double length = 0.0;
    for (int i = 0; i < k; ++i) length += ends[2 * i + 1] - ends[2 * i];
    EXPECT_NEAR(out[0], length, 1e-15);
    for (int n = 1; n < terms; n += 9) {
      const double t = n * std::numbers::pi / 2.0;
      double quad = 0.0;
      for (int i = 0; i < k; ++i) {
        quad += test::adaptive_simpson([t](double z) { return std::cos(t * (z + 1.0)); }, ends[2 * i],
                                       ends[2 * i + 1], 1e-13, n + 1);
      }
      EXPECT_NEAR(out[n], quad, 1e-9) << "n=" << n;
    }
  }
}

TEST(Integrate, RequiresMatchedBuffer) {
  const auto buffer = IntervalBuffer::from_lists(1, 1, {parse("10")});
  EXPECT_THROW(integrate_intervals(buffer, 4), PreconditionError);
}

TEST(MeshToFof, EmptyMesh) {
  const auto result = mesh_to_fof(TriangleMesh{}, 8, 8, 16);
  for (double v : result.fof.data()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(result.report.raster.events, 0u);
}

TEST(MeshToFof, SphereCenterColumnCrossesAtRadius) {
  const auto result = mesh_to_fof(icosphere(0.6, 4), 64, 64, 128);
  // The four center pixels sit 1/64 off the axis; the chord there is 0.5997.
  const double half_chord = std::sqrt(0.36 - 2.0 * std::pow(1.0 / 64.0, 2));
  const auto crossing = [&](double lo, double hi) {
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      const bool lo_in = evaluate_point(result.fof, 32, 32, lo) > 0.5;
      const bool mid_in = evaluate_point(result.fof, 32, 32, mid) > 0.5;
      (lo_in == mid_in ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  EXPECT_NEAR(crossing(-0.9, 0.0), -half_chord, 0.01);
  EXPECT_NEAR(crossing(0.0, 0.9), half_chord, 0.01);
}

TEST(MeshToFof, MatcherSuppressesFloatingMass) {
  const int n = 96;
  const auto clean = mesh_to_fof(icosphere(0.6, 4), n, n, 8);
  const TriangleMesh open = open_sphere(0.6, 4, 0.1, 5);
  const auto with = mesh_to_fof(open, n, n, 8, MatchPolicy::kAutomaton);
  const auto without = mesh_to_fof(open, n, n, 8, MatchPolicy::kDisabled);
  std::size_t covered = 0;
  std::size_t ok_with = 0;
  std::size_t ok_without = 0;
  for (std::size_t p = 0; p < clean.fof.pixel_count(); ++p) {
    const double a0 = clean.fof.pixel(p)[0];
    if (a0 <= 0.0) continue;
    ++covered;
    if (with.fof.pixel(p)[0] <= a0 + 0.05) ++ok_with;
    if (without.fof.pixel(p)[0] <= a0 + 0.05) ++ok_without;
  }
  EXPECT_GE(static_cast<double>(ok_with), 0.99 * static_cast<double>(covered));
  EXPECT_LT(static_cast<double>(ok_without), 0.99 * static_cast<double>(covered));
}

}  // namespace
}  // namespace fofx
