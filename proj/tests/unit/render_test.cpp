#include <gtest/gtest.h>

#include <cmath>

#include "fofx/errors.hpp"
#include "fofx/render.hpp"
#include "fofx/shapes.hpp"
#include "support.hpp"

namespace fofx {
namespace {

TEST(YawRotation, QuarterTurnsAreExact) {
  const Eigen::Matrix3d r90 = yaw_rotation(90.0);
  EXPECT_EQ(r90 * Vec3(0, 0, 1), Vec3(1, 0, 0));
  EXPECT_EQ(yaw_rotation(180.0) * Vec3(1, 2, 3), Vec3(-1, 2, -3));
  EXPECT_EQ(yaw_rotation(-270.0), r90);
  EXPECT_TRUE(yaw_rotation(45.0).isUnitary(1e-12));
}

TEST(RenderNormalMap, FrontQuadHasConstantNormal) {
  const NormalMapImage map = render_normal_map(test::square(0.5, 0.0), 16, 16, 0.0);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) {
      const bool inside = std::abs(cell_center(x, 16)) < 0.5 && std::abs(cell_center(y, 16)) < 0.5;
      EXPECT_EQ(map.normal(y, x), inside ? Vec3(0, 0, -1) : Vec3::Zero());
    }
  }
  EXPECT_EQ(map.foreground_pixels(), 64u);
}

TEST(RenderNormalMap, NearerSurfaceWins) {
  // A small quad facing -z in front of a larger one facing +z.
  const TriangleMesh scene = test::merged(test::square(0.8, 0.5, false), test::square(0.3, -0.2, true));
  const NormalMapImage map = render_normal_map(scene, 20, 20, 0.0);
  EXPECT_EQ(map.normal(10, 10), Vec3(0, 0, -1));
  EXPECT_EQ(map.normal(3, 3), Vec3(0, 0, 1));
  const NormalMapImage reversed =
      render_normal_map(test::merged(test::square(0.3, -0.2, true), test::square(0.8, 0.5, false)), 20, 20, 0.0);
  EXPECT_EQ(reversed.normals.data, map.normals.data);
}

TEST(RenderNormalMap, SphereHalfTurnIsMirrorWithZNegated) {
  const TriangleMesh sphere = icosphere(0.7, 3);
  const int n = 64;
  const NormalMapImage front = render_normal_map(sphere, n, n, 0.0);
  const NormalMapImage back = render_normal_map(sphere, n, n, 180.0);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const Vec3 f = front.normal(y, n - 1 - x);
      const Vec3 b = back.normal(y, x);
      EXPECT_NEAR(b.x(), f.x(), 1e-6);
      EXPECT_NEAR(b.y(), f.y(), 1e-6);
      EXPECT_NEAR(b.z(), -f.z(), 1e-6);
    }
  }
}

TEST(RenderNormalMap, ForegroundNormalsAreUnit) {
  for (const auto& map : render_normal_maps(torus(0.5, 0.2, 32, 16), 48, 48)) {
    for (int y = 0; y < 48; ++y) {
      for (int x = 0; x < 48; ++x) {
        const double len = map.normal(y, x).norm();
        if (len > 0.0) EXPECT_NEAR(len, 1.0, 1e-4);
      }
    }
  }
}

TEST(NormalDifference, IdenticalAndOrthogonal) {
  const auto a = render_normal_maps(test::square(0.5, 0.0), 16, 16);
  EXPECT_EQ(normal_difference(a, a), 0.0);
  auto b = a;
  for (auto& map : b) {
    for (int y = 0; y < 16; ++y) {
      for (int x = 0; x < 16; ++x) {
        if (map.normal(y, x).squaredNorm() == 0.0) continue;
        map.normals.at(y, x, 0) = 1.0;
        map.normals.at(y, x, 1) = 0.0;
        map.normals.at(y, x, 2) = 0.0;
      }
    }
  }
  // Only the yaw-0 and yaw-180 views see the quad; each covers 64 pixels.
  double fg = 0.0;
  for (const auto& map : a) fg += static_cast<double>(map.foreground_pixels());
  EXPECT_NEAR(normal_difference(a, b), 2.0 * fg / (4.0 * 256.0), 1e-12);
}

TEST(NormalDifference, MatchesDirectLoop) {
  const auto a = render_normal_maps(icosphere(0.6, 2), 24, 24);
  const auto b = render_normal_maps(icosphere(0.6, 3), 24, 24);
  double sum = 0.0;
  for (std::size_t v = 0; v < a.size(); ++v) {
    for (int y = 0; y < 24; ++y) {
      for (int x = 0; x < 24; ++x) sum += (a[v].normal(y, x) - b[v].normal(y, x)).squaredNorm();
    }
  }
  EXPECT_NEAR(normal_difference(a, b), sum / (4.0 * 24 * 24), 1e-12);
}

Image oracle_image(bool perturbed) {
  Image img(40, 48, 1);
  for (int y = 0; y < 40; ++y) {
    for (int x = 0; x < 48; ++x) {
      double v = 0.5 + 0.35 * std::sin(0.31 * x) * std::cos(0.17 * y);
      if (perturbed) v += 0.08 * std::sin(0.73 * x + 0.41 * y) + 0.02 * std::cos(1.3 * y);
      img.at(y, x, 0) = v;
    }
  }
  return img;
}

TEST(ImageQuality, IdenticalImages) {
  const Image a = oracle_image(false);
  const ImageQuality q = psnr_ssim(a, a);
  EXPECT_TRUE(std::isinf(q.psnr));
  EXPECT_DOUBLE_EQ(q.ssim, 1.0);
}

TEST(ImageQuality, ConstantOffsetIsTwentyDecibels) {
  const Image a = oracle_image(false);
  Image b = a;
  for (double& v : b.data) v += 0.1;
  EXPECT_NEAR(psnr_ssim(a, b).psnr, 20.0, 1e-9);
}

TEST(ImageQuality, ReferencePair) {
  const ImageQuality q = psnr_ssim(oracle_image(false), oracle_image(true));
  EXPECT_NEAR(q.ssim, 0.8025905407528905, 1e-4);
  EXPECT_NEAR(q.psnr, 24.683120217564788, 1e-9);
}

TEST(ImageQuality, ShapeErrors) {
  EXPECT_THROW(psnr_ssim(Image(12, 12, 1), Image(12, 13, 1)), ShapeError);
  EXPECT_THROW(ssim(Image(10, 20, 1), Image(10, 20, 1)), ShapeError);
  std::vector<NormalMapImage> one(1);
  one[0].normals = Image(12, 12, 3);
  EXPECT_THROW(psnr_ssim(one, std::vector<NormalMapImage>{}), ShapeError);
}

}  // namespace
}  // namespace fofx
