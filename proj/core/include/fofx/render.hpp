#pragma once

#include <array>
#include <limits>
#include <span>
#include <vector>

#include "fofx/geometry.hpp"

namespace fofx {

/// Row-major, channel-interleaved real image.
struct Image {
  int height = 0;
  int width = 0;
  int channels = 1;
  std::vector<double> data;

  Image() = default;
  Image(int h, int w, int c);

  double& at(int y, int x, int c) { return data[(static_cast<std::size_t>(y) * width + x) * channels + c]; }
  double at(int y, int x, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  bool same_shape(const Image& o) const {
    return height == o.height && width == o.width && channels == o.channels;
  }
};

/// Orthographic normal map seen from a camera rotated by `yaw_degrees` about
/// the vertical (y) axis. Normals stay in the mesh frame; background pixels
/// hold the zero vector.
struct NormalMapImage {
  double yaw_degrees = 0.0;
  Image normals;  // 3 channels

  Vec3 normal(int y, int x) const {
    return {normals.at(y, x, 0), normals.at(y, x, 1), normals.at(y, x, 2)};
  }
  std::size_t foreground_pixels() const;
  /// Maps each component n to (n + 1) / 2, so background becomes 0.5 grey.
  Image encoded() const;
};

inline constexpr std::array<double, 4> kDefaultYaws = {0.0, 90.0, 180.0, 270.0};

/// Rotation about +y; multiples of 90 degrees use exact sines and cosines.
Eigen::Matrix3d yaw_rotation(double yaw_degrees);

/// Single-sample (no anti-aliasing) z-buffer render of interpolated,
/// renormalized vertex normals. The nearest surface along +z wins.
NormalMapImage render_normal_map(const TriangleMesh& mesh, int height, int width, double yaw_degrees);
std::vector<NormalMapImage> render_normal_maps(const TriangleMesh& mesh, int height, int width,
                                               std::span<const double> yaws = kDefaultYaws);

/// Mean over pixels and views of |nA - nB|^2, background included.
double normal_difference(const std::vector<NormalMapImage>& a, const std::vector<NormalMapImage>& b);

struct ImageQuality {
  double psnr = std::numeric_limits<double>::infinity();  // dB, +inf for identical inputs
  double ssim = 1.0;
};

double mean_squared_error(const Image& a, const Image& b);
/// PSNR for a peak value of 1.
double psnr_from_mse(double mse);

/// Gaussian-window SSIM (11x11, sigma 1.5, k1 0.01, k2 0.03, data range 1)
/// averaged over the window-valid region and over channels.
double ssim(const Image& a, const Image& b);

ImageQuality psnr_ssim(const Image& a, const Image& b);
/// Encodes both map sets, pools the MSE across views for PSNR and averages
/// SSIM over views.
ImageQuality psnr_ssim(const std::vector<NormalMapImage>& a, const std::vector<NormalMapImage>& b);

}  // namespace fofx
