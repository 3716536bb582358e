#include "fofx/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fofx/errors.hpp"

namespace fofx {

void TriangleMesh::validate() const {
  const auto n = vertices.size();
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (!vertices[i].allFinite()) {
      throw DomainError("vertex " + std::to_string(i) + " has a non-finite coordinate");
    }
  }
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    for (auto idx : triangles[t]) {
      if (idx >= n) {
        throw IndexError("triangle " + std::to_string(t) + " references vertex " +
                         std::to_string(idx) + " of " + std::to_string(n));
      }
    }
  }
}

BoundingBox bounding_box(const TriangleMesh& mesh) {
  BoundingBox box;
  if (mesh.vertices.empty()) return box;
  box.min = box.max = mesh.vertices.front();
  for (const auto& v : mesh.vertices) {
    box.min = box.min.cwiseMin(v);
    box.max = box.max.cwiseMax(v);
  }
  return box;
}

NormalizedMesh normalize_mesh(const TriangleMesh& mesh, double margin) {
  if (!(margin >= 0.0 && margin < 1.0)) {
    throw DomainError("margin must lie in [0, 1)");
  }
  if (mesh.vertices.empty()) throw EmptyInput("cannot normalize an empty mesh");
  mesh.validate();

  const BoundingBox box = bounding_box(mesh);
  const double half = 0.5 * box.extent().maxCoeff();
  if (!(half > 0.0)) throw DegenerateInput("mesh bounding box has zero extent");

  NormalizedMesh out;
  out.transform.scale = (1.0 - margin) / half;
  out.transform.translation = -out.transform.scale * box.center();
  out.mesh = transformed(mesh, out.transform);
  return out;
}

TriangleMesh transformed(const TriangleMesh& mesh, const Similarity& t) {
  TriangleMesh out;
  out.triangles = mesh.triangles;
  out.vertices.reserve(mesh.vertices.size());
  for (const auto& v : mesh.vertices) out.vertices.push_back(t.apply(v));
  return out;
}

Vec3 face_normal(const TriangleMesh& mesh, std::size_t tri) {
  const auto& t = mesh.triangles[tri];
  const Vec3& a = mesh.vertices[t[0]];
  const Vec3& b = mesh.vertices[t[1]];
  const Vec3& c = mesh.vertices[t[2]];
  return (b - a).cross(c - a);
}

double triangle_area(const TriangleMesh& mesh, std::size_t tri) {
  return 0.5 * face_normal(mesh, tri).norm();
}

double surface_area(const TriangleMesh& mesh) {
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) total += triangle_area(mesh, t);
  return total;
}

std::vector<Vec3> vertex_normals(const TriangleMesh& mesh) {
  std::vector<Vec3> normals(mesh.vertices.size(), Vec3::Zero());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const Vec3 n = face_normal(mesh, t);  // length = 2 * area
    for (auto idx : mesh.triangles[t]) normals[idx] += n;
  }
  for (auto& n : normals) {
    const double len = n.norm();
    if (len > 0.0) n /= len;
  }
  return normals;
}

double signed_volume(const TriangleMesh& mesh) {
  double vol = 0.0;
  for (const auto& t : mesh.triangles) {
    vol += mesh.vertices[t[0]].dot(mesh.vertices[t[1]].cross(mesh.vertices[t[2]]));
  }
  return vol / 6.0;
}

std::vector<std::array<std::uint32_t, 2>> unique_edges(const TriangleMesh& mesh) {
  std::vector<std::array<std::uint32_t, 2>> edges;
  edges.reserve(mesh.triangles.size() * 3);
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      std::uint32_t a = t[k];
      std::uint32_t b = t[(k + 1) % 3];
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      edges.push_back({a, b});
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

long euler_characteristic(const TriangleMesh& mesh) {
  std::vector<char> used(mesh.vertices.size(), 0);
  for (const auto& t : mesh.triangles)
    for (auto idx : t) used[idx] = 1;
  const long v = std::count(used.begin(), used.end(), 1);
  return v - static_cast<long>(unique_edges(mesh).size()) +
         static_cast<long>(mesh.triangles.size());
}

}  // namespace fofx
