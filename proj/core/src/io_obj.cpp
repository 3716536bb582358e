#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "fofx/errors.hpp"
#include "fofx/io.hpp"

namespace fofx {

namespace {

std::string_view next_token(std::string_view& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    s = {};
    return {};
  }
  std::size_t e = s.find_first_of(" \t\r", b);
  if (e == std::string_view::npos) e = s.size();
  std::string_view tok = s.substr(b, e - b);
  s.remove_prefix(e);
  return tok;
}

double parse_double(std::string_view tok, std::size_t line) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("invalid number '" + std::string(tok) + "'", line);
  }
  return v;
}

std::uint32_t resolve_index(std::string_view tok, std::size_t vertex_count, std::size_t line) {
  // "v", "v/vt", "v//vn" or "v/vt/vn"; only the position index matters.
  const std::string_view head = tok.substr(0, tok.find('/'));
  long long idx = 0;
  const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), idx);
  if (head.empty() || ec != std::errc() || ptr != head.data() + head.size()) {
    throw ParseError("invalid face index '" + std::string(tok) + "'", line);
  }
  const auto count = static_cast<long long>(vertex_count);
  long long resolved = 0;
  if (idx > 0) {
    resolved = idx - 1;
  } else if (idx < 0) {
    resolved = count + idx;
  } else {
    throw ParseError("face index 0 is invalid (indices are 1-based)", line);
  }
  if (resolved < 0 || resolved >= count) {
    throw ParseError("face index " + std::to_string(idx) + " out of range", line);
  }
  return static_cast<std::uint32_t>(resolved);
}

}  // namespace

TriangleMesh read_obj(std::istream& in) {
  TriangleMesh mesh;
  std::string raw;
  std::size_t line = 0;
  std::vector<std::uint32_t> face;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s(raw);
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    const std::string_view key = next_token(s);
    if (key == "v") {
      Vec3 p;
      for (int k = 0; k < 3; ++k) {
        const std::string_view tok = next_token(s);
        if (tok.empty()) throw ParseError("vertex needs three coordinates", line);
        p[k] = parse_double(tok, line);
      }
      mesh.vertices.push_back(p);
    } else if (key == "f") {
      face.clear();
      for (std::string_view tok = next_token(s); !tok.empty(); tok = next_token(s)) {
        face.push_back(resolve_index(tok, mesh.vertices.size(), line));
      }
      if (face.size() < 3) throw ParseError("face needs at least three vertices", line);
      for (std::size_t k = 1; k + 1 < face.size(); ++k) {
        mesh.triangles.push_back({face[0], face[k], face[k + 1]});
      }
    }
  }
  return mesh;
}

TriangleMesh read_obj(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_obj(in);
}

void write_obj(std::ostream& out, const TriangleMesh& mesh) {
  char buf[64];
  std::string text;
  for (const Vec3& v : mesh.vertices) {
    text += 'v';
    for (int k = 0; k < 3; ++k) {
      const auto r = std::to_chars(buf, buf + sizeof buf, v[k], std::chars_format::general, 9);
      text += ' ';
      text.append(buf, r.ptr);
    }
    text += '\n';
  }
  for (const auto& t : mesh.triangles) {
    text += "f " + std::to_string(t[0] + 1) + ' ' + std::to_string(t[1] + 1) + ' ' +
            std::to_string(t[2] + 1) + '\n';
  }
  out << text;
  if (!out) throw IoError("write failed");
}

void write_obj(const std::filesystem::path& path, const TriangleMesh& mesh) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path.string());
  write_obj(out, mesh);
}

namespace {
std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}
}  // namespace

TriangleMesh read_mesh(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".obj") return read_obj(path);
  if (ext == ".ply") return read_ply(path);
  throw UsageError("unsupported mesh format '" + ext + "' (expected .obj or .ply)");
}

void write_mesh(const std::filesystem::path& path, const TriangleMesh& mesh) {
  const std::string ext = lower_extension(path);
  if (ext == ".obj") return write_obj(path, mesh);
  if (ext == ".ply") return write_ply(path, mesh);
  throw UsageError("unsupported mesh format '" + ext + "' (expected .obj or .ply)");
}

}  // namespace fofx
