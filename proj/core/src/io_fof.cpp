#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>

#include "fofx/errors.hpp"
#include "fofx/io.hpp"

namespace fofx {

namespace {

template <class T>
void put(std::string& out, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  }
  out.append(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get(const char* p) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  }
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

std::uint64_t fof_file_size(int height, int width, int terms) {
  return FofFileHeader::kSize + static_cast<std::uint64_t>(height) * width * terms * 4;
}

void write_fof(std::ostream& out, const FofGrid& fof) {
  std::string bytes;
  bytes.reserve(fof_file_size(fof.height(), fof.width(), fof.terms()));
  bytes.append(FofFileHeader::kMagic, 4);
  put<std::uint16_t>(bytes, FofFileHeader::kVersion);
  put<std::uint8_t>(bytes, FofFileHeader::kFloat32);
  put<std::uint8_t>(bytes, 0);
  put<std::uint32_t>(bytes, static_cast<std::uint32_t>(fof.height()));
  put<std::uint32_t>(bytes, static_cast<std::uint32_t>(fof.width()));
  put<std::uint32_t>(bytes, static_cast<std::uint32_t>(fof.terms()));
  for (double v : fof.data()) put<float>(bytes, static_cast<float>(v));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed");
}

void write_fof(const std::filesystem::path& path, const FofGrid& fof) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path.string());
  write_fof(out, fof);
}

FofGrid read_fof(std::istream& in) {
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < FofFileHeader::kSize) {
    throw FormatError("truncated header: expected " + std::to_string(FofFileHeader::kSize) +
                      " bytes, got " + std::to_string(bytes.size()));
  }
  if (std::memcmp(bytes.data(), FofFileHeader::kMagic, 4) != 0) throw FormatError("bad magic (expected FOF1)");
  const auto version = get<std::uint16_t>(bytes.data() + 4);
  if (version != FofFileHeader::kVersion) {
    throw FormatError("unsupported version " + std::to_string(version));
  }
  const auto dtype = static_cast<std::uint8_t>(bytes[6]);
  if (dtype != FofFileHeader::kFloat32) throw FormatError("unsupported dtype " + std::to_string(dtype));
  FofFileHeader h;
  h.height = get<std::uint32_t>(bytes.data() + 8);
  h.width = get<std::uint32_t>(bytes.data() + 12);
  h.terms = get<std::uint32_t>(bytes.data() + 16);
  const std::uint32_t limit = 1u << 30;
  if (h.height == 0 || h.width == 0 || h.terms == 0 || h.height > limit || h.width > limit || h.terms > limit) {
    throw FormatError("invalid grid shape");
  }
  const std::uint64_t expected = h.payload_bytes();
  const std::uint64_t actual = bytes.size() - FofFileHeader::kSize;
  if (actual != expected) {
    throw FormatError(std::string(actual < expected ? "truncated" : "oversized") + " payload: expected " +
                      std::to_string(expected) + " bytes, got " + std::to_string(actual));
  }
  std::vector<double> data(expected / 4);
  const char* p = bytes.data() + FofFileHeader::kSize;
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<double>(get<float>(p + 4 * i));
  try {
    return FofGrid(static_cast<int>(h.height), static_cast<int>(h.width), static_cast<int>(h.terms),
                   std::move(data));
  } catch (const DomainError& e) {
    throw FormatError(std::string("payload: ") + e.what());
  }
}

FofGrid read_fof(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_fof(in);
}

}  // namespace fofx
