#pragma once

#include <array>
#include <cstdint>

namespace fofx::mc {

// Corner c of a cell sits at offset (c&1 ^ c>>1&1, c>>1&1, c>>2&1) in
// (x, y, z): 0 (0,0,0) 1 (1,0,0) 2 (1,1,0) 3 (0,1,0) 4..7 the same at z+1.
// Edges 0-3 bottom ring, 4-7 top ring, 8-11 vertical (parallel to z).
// Bit c of the case index is set when corner c is below the iso-value.
extern const std::array<std::uint16_t, 256> kEdgeTable;
extern const std::array<std::array<std::int8_t, 16>, 256> kTriangleTable;

inline constexpr std::array<std::array<int, 2>, 12> kEdgeCorners{{
    {0, 1}, {1, 2}, {3, 2}, {0, 3}, {4, 5}, {5, 6}, {7, 6}, {4, 7}, {0, 4}, {1, 5}, {2, 6}, {3, 7},
}};

inline constexpr std::array<std::array<int, 3>, 8> kCornerOffsets{{
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1},
}};

}  // namespace fofx::mc
