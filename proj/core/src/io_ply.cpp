#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "fofx/errors.hpp"
#include "fofx/io.hpp"

namespace fofx {

namespace {

enum class Scalar { kInt8, kUint8, kInt16, kUint16, kInt32, kUint32, kFloat32, kFloat64 };

Scalar parse_scalar(const std::string& name, std::size_t line) {
  if (name == "char" || name == "int8") return Scalar::kInt8;
  if (name == "uchar" || name == "uint8") return Scalar::kUint8;
  if (name == "short" || name == "int16") return Scalar::kInt16;
  if (name == "ushort" || name == "uint16") return Scalar::kUint16;
  if (name == "int" || name == "int32") return Scalar::kInt32;
  if (name == "uint" || name == "uint32") return Scalar::kUint32;
  if (name == "float" || name == "float32") return Scalar::kFloat32;
  if (name == "double" || name == "float64") return Scalar::kFloat64;
  throw ParseError("unknown PLY scalar type '" + name + "'", line);
}

std::size_t scalar_size(Scalar s) {
  switch (s) {
    case Scalar::kInt8:
    case Scalar::kUint8:
      return 1;
    case Scalar::kInt16:
    case Scalar::kUint16:
      return 2;
    case Scalar::kInt32:
    case Scalar::kUint32:
    case Scalar::kFloat32:
      return 4;
    case Scalar::kFloat64:
      return 8;
  }
  return 0;
}

struct Property {
  std::string name;
  Scalar type = Scalar::kFloat32;
  bool is_list = false;
  Scalar count_type = Scalar::kUint8;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> properties;
};

template <class T>
T load_le(const unsigned char* p) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  }
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

class BinaryReader {
 public:
  explicit BinaryReader(std::istream& in) : in_(in) {}

  double read(Scalar s) {
    unsigned char buf[8];
    const std::size_t n = scalar_size(s);
    in_.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(n));
    if (in_.gcount() != static_cast<std::streamsize>(n)) throw ParseError("unexpected end of PLY data");
    switch (s) {
      case Scalar::kInt8:
        return static_cast<double>(static_cast<std::int8_t>(buf[0]));
      case Scalar::kUint8:
        return static_cast<double>(buf[0]);
      case Scalar::kInt16:
        return static_cast<double>(load_le<std::int16_t>(buf));
      case Scalar::kUint16:
        return static_cast<double>(load_le<std::uint16_t>(buf));
      case Scalar::kInt32:
        return static_cast<double>(load_le<std::int32_t>(buf));
      case Scalar::kUint32:
        return static_cast<double>(load_le<std::uint32_t>(buf));
      case Scalar::kFloat32:
        return static_cast<double>(load_le<float>(buf));
      case Scalar::kFloat64:
        return load_le<double>(buf);
    }
    return 0.0;
  }

 private:
  std::istream& in_;
};

class AsciiReader {
 public:
  AsciiReader(std::istream& in, std::size_t line) : in_(in), line_(line) {}

  double read(Scalar) {
    while (pos_ >= tokens_.size()) {
      std::string raw;
      if (!std::getline(in_, raw)) throw ParseError("unexpected end of PLY data", line_);
      ++line_;
      tokens_.clear();
      pos_ = 0;
      std::istringstream ss(raw);
      for (std::string t; ss >> t;) tokens_.push_back(t);
    }
    const std::string& t = tokens_[pos_++];
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      throw ParseError("invalid PLY value '" + t + "'", line_);
    }
    return v;
  }

 private:
  std::istream& in_;
  std::size_t line_;
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

std::uint32_t to_index(double v, std::size_t vertex_count) {
  if (!(v >= 0.0) || v != static_cast<double>(static_cast<std::uint64_t>(v)) ||
      v >= static_cast<double>(vertex_count)) {
    throw ParseError("face index out of range");
  }
  return static_cast<std::uint32_t>(v);
}

template <class Reader>
TriangleMesh read_body(Reader& reader, const std::vector<Element>& elements) {
  TriangleMesh mesh;
  std::vector<std::uint32_t> face;
  for (const Element& e : elements) {
    const bool vertex = e.name == "vertex";
    if (vertex) mesh.vertices.reserve(e.count);
    for (std::size_t i = 0; i < e.count; ++i) {
      Vec3 p = Vec3::Zero();
      for (const Property& prop : e.properties) {
        if (prop.is_list) {
          const double n = reader.read(prop.count_type);
          if (!(n >= 0.0)) throw ParseError("negative list length");
          const auto count = static_cast<std::size_t>(n);
          face.clear();
          for (std::size_t k = 0; k < count; ++k) face.push_back(to_index(reader.read(prop.type), mesh.vertices.size()));
          if (!vertex && (prop.name == "vertex_indices" || prop.name == "vertex_index")) {
            if (count < 3) throw ParseError("face with fewer than three vertices");
            for (std::size_t k = 1; k + 1 < count; ++k) {
              mesh.triangles.push_back({face[0], face[k], face[k + 1]});
            }
          }
          continue;
        }
        const double v = reader.read(prop.type);
        if (vertex) {
          if (prop.name == "x") p.x() = v;
          if (prop.name == "y") p.y() = v;
          if (prop.name == "z") p.z() = v;
        }
      }
      if (vertex) mesh.vertices.push_back(p);
    }
  }
  return mesh;
}

}  // namespace

TriangleMesh read_ply(std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  const auto next_line = [&]() {
    if (!std::getline(in, raw)) throw ParseError("unexpected end of PLY header", line);
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
  };
  next_line();
  if (raw != "ply") throw ParseError("missing 'ply' magic", line);

  bool binary = false;
  bool have_format = false;
  std::vector<Element> elements;
  for (;;) {
    next_line();
    std::istringstream ss(raw);
    std::string key;
    ss >> key;
    if (key == "end_header") break;
    if (key.empty() || key == "comment" || key == "obj_info") continue;
    if (key == "format") {
      std::string fmt;
      ss >> fmt;
      if (fmt == "ascii") {
        binary = false;
      } else if (fmt == "binary_little_endian") {
        binary = true;
      } else {
        throw ParseError("unsupported PLY format '" + fmt + "'", line);
      }
      have_format = true;
    } else if (key == "element") {
      Element e;
      long long count = -1;
      ss >> e.name >> count;
      if (e.name != "vertex" && e.name != "face") {
        throw ParseError("unsupported PLY element '" + e.name + "'", line);
      }
      if (count < 0) throw ParseError("invalid element count", line);
      e.count = static_cast<std::size_t>(count);
      elements.push_back(std::move(e));
    } else if (key == "property") {
      if (elements.empty()) throw ParseError("property before element", line);
      Property p;
      std::string type;
      ss >> type;
      if (type == "list") {
        std::string count_type;
        std::string item_type;
        ss >> count_type >> item_type >> p.name;
        p.is_list = true;
        p.count_type = parse_scalar(count_type, line);
        p.type = parse_scalar(item_type, line);
      } else {
        p.type = parse_scalar(type, line);
        ss >> p.name;
      }
      if (p.name.empty()) throw ParseError("property without a name", line);
      elements.back().properties.push_back(std::move(p));
    } else {
      throw ParseError("unknown PLY header keyword '" + key + "'", line);
    }
  }
  if (!have_format) throw ParseError("missing PLY format line", line);
  for (const Element& e : elements) {
    if (e.name != "vertex") continue;
    for (const char* axis : {"x", "y", "z"}) {
      bool found = false;
      for (const Property& p : e.properties) found = found || (p.name == axis && !p.is_list);
      if (!found) throw ParseError(std::string("vertex element lacks property '") + axis + "'");
    }
  }

  if (binary) {
    BinaryReader reader(in);
    return read_body(reader, elements);
  }
  AsciiReader reader(in, line);
  return read_body(reader, elements);
}

TriangleMesh read_ply(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_ply(in);
}

namespace {
template <class T>
void append_le(std::string& out, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  }
  out.append(reinterpret_cast<const char*>(b), sizeof(T));
}
}  // namespace

void write_ply(std::ostream& out, const TriangleMesh& mesh, PlyFormat format) {
  std::string text = "ply\n";
  text += format == PlyFormat::kAscii ? "format ascii 1.0\n" : "format binary_little_endian 1.0\n";
  text += "element vertex " + std::to_string(mesh.vertices.size()) + "\n";
  text += "property double x\nproperty double y\nproperty double z\n";
  text += "element face " + std::to_string(mesh.triangles.size()) + "\n";
  text += "property list uchar int vertex_indices\nend_header\n";
  if (format == PlyFormat::kAscii) {
    char buf[64];
    for (const Vec3& v : mesh.vertices) {
      for (int k = 0; k < 3; ++k) {
        // Shortest representation that round-trips exactly.
        const auto r = std::to_chars(buf, buf + sizeof buf, v[k]);
        if (k > 0) text += ' ';
        text.append(buf, r.ptr);
      }
      text += '\n';
    }
    for (const auto& t : mesh.triangles) {
      text += "3 " + std::to_string(t[0]) + ' ' + std::to_string(t[1]) + ' ' + std::to_string(t[2]) + '\n';
    }
  } else {
    for (const Vec3& v : mesh.vertices) {
      for (int k = 0; k < 3; ++k) append_le<double>(text, v[k]);
    }
    for (const auto& t : mesh.triangles) {
      text += static_cast<char>(3);
      for (auto i : t) append_le<std::int32_t>(text, static_cast<std::int32_t>(i));
    }
  }
  out << text;
  if (!out) throw IoError("write failed");
}

void write_ply(const std::filesystem::path& path, const TriangleMesh& mesh, PlyFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path.string());
  write_ply(out, mesh, format);
}

}  // namespace fofx
