#include <algorithm>
#include <string>

#include "fofx/errors.hpp"
#include "fofx/fof2mesh.hpp"
#include "mc_tables.hpp"

namespace fofx {

std::size_t ReliabilityMesh::reliable_count() const {
  return static_cast<std::size_t>(std::count(reliable.begin(), reliable.end(), 1));
}

namespace {

// The pinned table marks corners below the iso-level, so its triangles already
// face the low side. The sphere signed-volume test pins this down.
constexpr bool kReverseTableWinding = false;

}  // namespace

ReliabilityMesh marching_cubes(int width, int height, int depth, double iso,
                               const SampleRowFn& sample_row) {
  if (width < 1 || height < 1 || depth < 1) throw ShapeError("volume dimensions must be >= 1");
  const int wp = width + 2;   // padded sample counts
  const int hp = height + 2;
  const int dp = depth + 2;
  const std::size_t plane = static_cast<std::size_t>(wp) * static_cast<std::size_t>(dp);

  std::vector<double> rows[2] = {std::vector<double>(plane), std::vector<double>(plane)};
  // Vertex ids of x- and z-edges per sample plane, y-edges between planes.
  std::vector<std::int32_t> x_edges[2] = {std::vector<std::int32_t>(plane, -1),
                                          std::vector<std::int32_t>(plane, -1)};
  std::vector<std::int32_t> z_edges[2] = {std::vector<std::int32_t>(plane, -1),
                                          std::vector<std::int32_t>(plane, -1)};
  std::vector<std::int32_t> y_edges(plane, -1);

  ReliabilityMesh out;
  auto& verts = out.mesh.vertices;
  auto& tris = out.mesh.triangles;

  const auto at = [dp](int i, int k) {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(dp) + static_cast<std::size_t>(k);
  };
  const auto sample_row_padded = [&](int jp, std::vector<double>& row) {
    if (jp == 0 || jp == hp - 1) {
      std::fill(row.begin(), row.end(), 0.0);
    } else {
      sample_row(jp - 1, row);
    }
  };

  int cur = 0;
  sample_row_padded(0, rows[cur]);
  for (int jp = 0; jp + 1 < hp; ++jp) {
    const int nxt = 1 - cur;
    sample_row_padded(jp + 1, rows[nxt]);
    std::fill(x_edges[nxt].begin(), x_edges[nxt].end(), -1);
    std::fill(z_edges[nxt].begin(), z_edges[nxt].end(), -1);
    std::fill(y_edges.begin(), y_edges.end(), -1);

    const std::vector<double>* corner_rows[2] = {&rows[cur], &rows[nxt]};

    for (int ip = 0; ip + 1 < wp; ++ip) {
      for (int kp = 0; kp + 1 < dp; ++kp) {
        double value[8];
        int cube = 0;
        for (int c = 0; c < 8; ++c) {
          const auto& off = mc::kCornerOffsets[static_cast<std::size_t>(c)];
          value[c] = (*corner_rows[off[1]])[at(ip + off[0], kp + off[2])];
          if (value[c] < iso) cube |= 1 << c;
        }
        const std::uint16_t mask = mc::kEdgeTable[static_cast<std::size_t>(cube)];
        if (mask == 0) continue;

        std::int32_t edge_vertex[12];
        for (int e = 0; e < 12; ++e) {
          if ((mask & (1u << e)) == 0) continue;
          const int c0 = mc::kEdgeCorners[static_cast<std::size_t>(e)][0];
          const int c1 = mc::kEdgeCorners[static_cast<std::size_t>(e)][1];
          const auto& o0 = mc::kCornerOffsets[static_cast<std::size_t>(c0)];
          const int si = ip + o0[0];
          const int sj = o0[1];  // 0 = current plane, 1 = next
          const int sk = kp + o0[2];
          EdgeAxis axis = e < 8 ? (e % 2 == 0 ? EdgeAxis::kX : EdgeAxis::kY) : EdgeAxis::kZ;

          std::int32_t* slot = nullptr;
          switch (axis) {
            case EdgeAxis::kX: slot = &x_edges[sj == 0 ? cur : nxt][at(si, sk)]; break;
            case EdgeAxis::kY: slot = &y_edges[at(si, sk)]; break;
            case EdgeAxis::kZ: slot = &z_edges[sj == 0 ? cur : nxt][at(si, sk)]; break;
          }
          if (*slot < 0) {
            const double v0 = value[c0];
            const double v1 = value[c1];
            const double t = v1 != v0 ? (iso - v0) / (v1 - v0) : 0.5;
            const auto& o1 = mc::kCornerOffsets[static_cast<std::size_t>(c1)];
            const int ui = si - 1;
            const int uj = jp + sj - 1;
            const int uk = sk - 1;
            const Vec3 p0(cell_center(ui, width), cell_center(uj, height), cell_center(uk, depth));
            const Vec3 p1(cell_center(ip + o1[0] - 1, width), cell_center(jp + o1[1] - 1, height),
                          cell_center(kp + o1[2] - 1, depth));
            *slot = static_cast<std::int32_t>(verts.size());
            verts.push_back(p0 + t * (p1 - p0));
            out.reliable.push_back(axis == EdgeAxis::kZ ? 1 : 0);
            out.origins.push_back({ui, uj, uk, axis});
          }
          edge_vertex[e] = *slot;
        }

        const auto& tri = mc::kTriangleTable[static_cast<std::size_t>(cube)];
        for (int t = 0; t < 16 && tri[static_cast<std::size_t>(t)] >= 0; t += 3) {
          const auto a = static_cast<std::uint32_t>(edge_vertex[tri[static_cast<std::size_t>(t)]]);
          const auto b = static_cast<std::uint32_t>(edge_vertex[tri[static_cast<std::size_t>(t + 1)]]);
          const auto c = static_cast<std::uint32_t>(edge_vertex[tri[static_cast<std::size_t>(t + 2)]]);
          if (kReverseTableWinding) {
            tris.push_back({a, c, b});
          } else {
            tris.push_back({a, b, c});
          }
        }
      }
    }
    cur = nxt;
  }
  return out;
}

ReliabilityMesh marching_cubes_flagged(const FofGrid& fof, int depth, double iso) {
  if (depth < 2) throw DomainError("z resolution must be >= 2, got " + std::to_string(depth));
  const CosineBasis basis(fof.terms(), cell_centered_grid(depth));
  const int width = fof.width();
  const int dp = depth + 2;
  const auto d = static_cast<std::size_t>(depth);
  return marching_cubes(width, fof.height(), depth, iso, [&](int y, std::span<double> row) {
    std::fill(row.begin(), row.end(), 0.0);
    for (int x = 0; x < width; ++x) {
      const std::size_t pixel =
          static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
      if (fof.empty_pixel(pixel)) continue;
      evaluate_column(fof.pixel(pixel), basis,
                      row.subspan(static_cast<std::size_t>(x + 1) * static_cast<std::size_t>(dp) + 1, d));
    }
  });
}

}  // namespace fofx
