#include <cmath>
#include <numbers>

#include "fofx/errors.hpp"
#include "fofx/raster.hpp"
#include "fofx/render.hpp"

namespace fofx {

Image::Image(int h, int w, int c) : height(h), width(w), channels(c) {
  if (h < 0 || w < 0 || c < 1) throw ShapeError("invalid image shape");
  data.assign(static_cast<std::size_t>(h) * w * c, 0.0);
}

std::size_t NormalMapImage::foreground_pixels() const {
  std::size_t n = 0;
  for (int y = 0; y < normals.height; ++y) {
    for (int x = 0; x < normals.width; ++x) {
      if (normal(y, x).squaredNorm() > 0.0) ++n;
    }
  }
  return n;
}

Image NormalMapImage::encoded() const {
  Image out = normals;
  for (double& v : out.data) v = 0.5 * (v + 1.0);
  return out;
}

Eigen::Matrix3d yaw_rotation(double yaw_degrees) {
  double c = 0.0;
  double s = 0.0;
  const double q = yaw_degrees / 90.0;
  if (q == std::round(q)) {
    static constexpr double kCos[] = {1.0, 0.0, -1.0, 0.0};
    static constexpr double kSin[] = {0.0, 1.0, 0.0, -1.0};
    const long k = ((static_cast<long>(q) % 4) + 4) % 4;
    c = kCos[k];
    s = kSin[k];
  } else {
    const double t = yaw_degrees * std::numbers::pi / 180.0;
    c = std::cos(t);
    s = std::sin(t);
  }
  Eigen::Matrix3d r;
  r << c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c;
  return r;
}

NormalMapImage render_normal_map(const TriangleMesh& mesh, int height, int width, double yaw_degrees) {
  if (height < 1 || width < 1) throw ShapeError("render size must be positive");
  mesh.validate();
  NormalMapImage out;
  out.yaw_degrees = yaw_degrees;
  out.normals = Image(height, width, 3);
  if (mesh.triangles.empty()) return out;

  const std::vector<Vec3> normals = vertex_normals(mesh);
  const Eigen::Matrix3d r = yaw_rotation(yaw_degrees);
  std::vector<Vec3> view(mesh.vertices.size());
  for (std::size_t i = 0; i < view.size(); ++i) view[i] = r * mesh.vertices[i];

  std::vector<double> depth(static_cast<std::size_t>(height) * width,
                            std::numeric_limits<double>::infinity());
  for (const auto& tri : mesh.triangles) {
    const Vec3& a = view[tri[0]];
    const Vec3& b = view[tri[1]];
    const Vec3& c = view[tri[2]];
    int sign = 0;
    raster::rasterize_triangle(a, b, c, height, width, sign,
                               [&](int x, int y, double wa, double wb, double wc) {
                                 const double z = wa * a.z() + wb * b.z() + wc * c.z();
                                 double& zb = depth[static_cast<std::size_t>(y) * width + x];
                                 if (!(z < zb)) return;
                                 zb = z;
                                 Vec3 n = wa * normals[tri[0]] + wb * normals[tri[1]] + wc * normals[tri[2]];
                                 const double len = n.norm();
                                 n = len > 0.0 ? Vec3(n / len) : Vec3::Zero();
                                 for (int k = 0; k < 3; ++k) out.normals.at(y, x, k) = n[k];
                               });
  }
  return out;
}

std::vector<NormalMapImage> render_normal_maps(const TriangleMesh& mesh, int height, int width,
                                               std::span<const double> yaws) {
  std::vector<NormalMapImage> maps;
  maps.reserve(yaws.size());
  for (double yaw : yaws) maps.push_back(render_normal_map(mesh, height, width, yaw));
  return maps;
}

}  // namespace fofx
