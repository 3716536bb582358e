#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "fofx/field.hpp"
#include "fofx/geometry.hpp"

namespace fofx {

// OBJ: v and f records only. Faces with more than three corners are
// fan-triangulated; indices may be 1-based or negative (relative). Texture,
// normal and material records are ignored.
TriangleMesh read_obj(std::istream& in);
TriangleMesh read_obj(const std::filesystem::path& path);
/// Writes v and f records with 9 significant digits.
void write_obj(std::ostream& out, const TriangleMesh& mesh);
void write_obj(const std::filesystem::path& path, const TriangleMesh& mesh);

enum class PlyFormat { kAscii, kBinaryLittleEndian };

// PLY: vertex x/y/z (any scalar type, extra properties skipped) and face
// index lists. Big-endian files and other elements raise ParseError.
TriangleMesh read_ply(std::istream& in);
TriangleMesh read_ply(const std::filesystem::path& path);
/// Vertices are stored as double, faces as uchar-count int lists.
void write_ply(std::ostream& out, const TriangleMesh& mesh,
               PlyFormat format = PlyFormat::kBinaryLittleEndian);
void write_ply(const std::filesystem::path& path, const TriangleMesh& mesh,
               PlyFormat format = PlyFormat::kBinaryLittleEndian);

/// Dispatches on the extension (.obj or .ply, case-insensitive).
TriangleMesh read_mesh(const std::filesystem::path& path);
void write_mesh(const std::filesystem::path& path, const TriangleMesh& mesh);

/// FOF container header. All integers little-endian.
///   offset 0  char[4] magic "FOF1"
///   offset 4  u16     version (1)
///   offset 6  u8      dtype (0 = float32)
///   offset 7  u8      reserved (0)
///   offset 8  u32     H
///   offset 12 u32     W
///   offset 16 u32     N
/// followed by H*W*N float32 values ordered by y, then x, then coefficient.
struct FofFileHeader {
  static constexpr char kMagic[4] = {'F', 'O', 'F', '1'};
  static constexpr std::uint16_t kVersion = 1;
  static constexpr std::uint8_t kFloat32 = 0;
  static constexpr std::size_t kSize = 20;

  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint32_t terms = 0;

  std::uint64_t payload_bytes() const {
    return static_cast<std::uint64_t>(height) * width * terms * 4;
  }
};

/// Byte size of a complete FOF file for the given grid shape.
std::uint64_t fof_file_size(int height, int width, int terms);

/// Coefficients are rounded to float32 (nearest-even) on write.
void write_fof(std::ostream& out, const FofGrid& fof);
void write_fof(const std::filesystem::path& path, const FofGrid& fof);
/// Throws FormatError for a bad magic, version or dtype and for truncated or
/// oversized payloads (with expected and actual byte counts).
FofGrid read_fof(std::istream& in);
FofGrid read_fof(const std::filesystem::path& path);

}  // namespace fofx
