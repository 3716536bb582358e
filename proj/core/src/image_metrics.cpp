#include <cmath>

#include "fofx/errors.hpp"
#include "fofx/render.hpp"

namespace fofx {

namespace {

constexpr int kRadius = 5;
constexpr double kSigma = 1.5;
constexpr double kK1 = 0.01;
constexpr double kK2 = 0.03;

std::array<double, 2 * kRadius + 1> gaussian_weights() {
  std::array<double, 2 * kRadius + 1> w{};
  double sum = 0.0;
  for (int i = -kRadius; i <= kRadius; ++i) {
    w[i + kRadius] = std::exp(-0.5 * i * i / (kSigma * kSigma));
    sum += w[i + kRadius];
  }
  for (double& v : w) v /= sum;
  return w;
}

// Separable Gaussian filter restricted to positions whose full window fits.
// Output is (h - 2r) x (w - 2r).
std::vector<double> filter_valid(const std::vector<double>& img, int h, int w) {
  static const auto kW = gaussian_weights();
  const int vw = w - 2 * kRadius;
  const int vh = h - 2 * kRadius;
  std::vector<double> rows(static_cast<std::size_t>(h) * vw);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < vw; ++x) {
      double s = 0.0;
      for (int k = 0; k <= 2 * kRadius; ++k) s += kW[k] * img[static_cast<std::size_t>(y) * w + x + k];
      rows[static_cast<std::size_t>(y) * vw + x] = s;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(vh) * vw);
  for (int y = 0; y < vh; ++y) {
    for (int x = 0; x < vw; ++x) {
      double s = 0.0;
      for (int k = 0; k <= 2 * kRadius; ++k) s += kW[k] * rows[static_cast<std::size_t>(y + k) * vw + x];
      out[static_cast<std::size_t>(y) * vw + x] = s;
    }
  }
  return out;
}

double ssim_channel(const Image& a, const Image& b, int c) {
  const int h = a.height;
  const int w = a.width;
  const std::size_t n = static_cast<std::size_t>(h) * w;
  std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
  for (int r = 0; r < h; ++r) {
    for (int q = 0; q < w; ++q) {
      const std::size_t i = static_cast<std::size_t>(r) * w + q;
      x[i] = a.at(r, q, c);
      y[i] = b.at(r, q, c);
      xx[i] = x[i] * x[i];
      yy[i] = y[i] * y[i];
      xy[i] = x[i] * y[i];
    }
  }
  const auto ux = filter_valid(x, h, w);
  const auto uy = filter_valid(y, h, w);
  const auto uxx = filter_valid(xx, h, w);
  const auto uyy = filter_valid(yy, h, w);
  const auto uxy = filter_valid(xy, h, w);
  const double c1 = kK1 * kK1;
  const double c2 = kK2 * kK2;
  double sum = 0.0;
  for (std::size_t i = 0; i < ux.size(); ++i) {
    const double vx = uxx[i] - ux[i] * ux[i];
    const double vy = uyy[i] - uy[i] * uy[i];
    const double vxy = uxy[i] - ux[i] * uy[i];
    const double num = (2.0 * ux[i] * uy[i] + c1) * (2.0 * vxy + c2);
    const double den = (ux[i] * ux[i] + uy[i] * uy[i] + c1) * (vx + vy + c2);
    sum += num / den;
  }
  return sum / static_cast<double>(ux.size());
}

}  // namespace

double mean_squared_error(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw ShapeError("image shapes differ");
  if (a.data.empty()) throw EmptyInput("empty image");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.data.size());
}

double psnr_from_mse(double mse) {
  if (mse <= 0.0) return std::numeric_limits<double>::infinity();
  return -10.0 * std::log10(mse);
}

double ssim(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw ShapeError("image shapes differ");
  if (a.height <= 2 * kRadius || a.width <= 2 * kRadius) {
    throw ShapeError("SSIM needs images of at least 11x11 pixels");
  }
  double sum = 0.0;
  for (int c = 0; c < a.channels; ++c) sum += ssim_channel(a, b, c);
  return sum / a.channels;
}

ImageQuality psnr_ssim(const Image& a, const Image& b) {
  return {psnr_from_mse(mean_squared_error(a, b)), ssim(a, b)};
}

ImageQuality psnr_ssim(const std::vector<NormalMapImage>& a, const std::vector<NormalMapImage>& b) {
  if (a.size() != b.size()) throw ShapeError("view counts differ");
  if (a.empty()) throw EmptyInput("no views");
  double mse = 0.0;
  double s = 0.0;
  for (std::size_t v = 0; v < a.size(); ++v) {
    const Image ea = a[v].encoded();
    const Image eb = b[v].encoded();
    mse += mean_squared_error(ea, eb);
    s += ssim(ea, eb);
  }
  const double n = static_cast<double>(a.size());
  return {psnr_from_mse(mse / n), s / n};
}

double normal_difference(const std::vector<NormalMapImage>& a, const std::vector<NormalMapImage>& b) {
  if (a.size() != b.size()) throw ShapeError("view counts differ");
  if (a.empty()) throw EmptyInput("no views");
  double sum = 0.0;
  std::size_t pixels = 0;
  for (std::size_t v = 0; v < a.size(); ++v) {
    const Image& ia = a[v].normals;
    const Image& ib = b[v].normals;
    if (!ia.same_shape(ib) || ia.channels != 3) throw ShapeError("normal map shapes differ");
    for (std::size_t i = 0; i < ia.data.size(); ++i) {
      const double d = ia.data[i] - ib.data[i];
      sum += d * d;
    }
    pixels += static_cast<std::size_t>(ia.height) * ia.width;
  }
  return sum / static_cast<double>(pixels);
}

}  // namespace fofx
