#include "fofx/field.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "fofx/errors.hpp"

namespace fofx {

FofGrid::FofGrid(int height, int width, int terms)
    : height_(height), width_(width), terms_(terms) {
  if (height < 1 || width < 1 || terms < 1) {
    throw ShapeError("FofGrid dimensions must be >= 1");
  }
  data_.assign(pixel_count() * static_cast<std::size_t>(terms_), 0.0);
}

FofGrid::FofGrid(int height, int width, int terms, std::vector<double> data)
    : FofGrid(height, width, terms) {
  if (data.size() != data_.size()) {
    throw ShapeError("FofGrid data has " + std::to_string(data.size()) + " values, expected " +
                     std::to_string(data_.size()));
  }
  for (double v : data) {
    if (!std::isfinite(v)) throw DomainError("FofGrid data contains a non-finite value");
  }
  data_ = std::move(data);
}

std::span<const double> FofGrid::coefficients(int x, int y) const {
  if (x < 0 || x >= width_ || y < 0 || y >= height_) {
    throw IndexError("pixel (" + std::to_string(x) + ", " + std::to_string(y) + ") out of range");
  }
  return pixel(static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x));
}

std::span<double> FofGrid::coefficients(int x, int y) {
  if (x < 0 || x >= width_ || y < 0 || y >= height_) {
    throw IndexError("pixel (" + std::to_string(x) + ", " + std::to_string(y) + ") out of range");
  }
  return pixel(static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x));
}

bool FofGrid::empty_pixel(std::size_t index) const {
  const auto c = pixel(index);
  return std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; });
}

void evaluate_column(std::span<const double> coefficients, const CosineBasis& basis,
                     std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t samples = out.size();
  for (int n = 0; n < basis.terms(); ++n) {
    const double c = coefficients[static_cast<std::size_t>(n)];
    if (c == 0.0) continue;
    const double* b = basis.term(n).data();
    double* o = out.data();
    for (std::size_t d = 0; d < samples; ++d) o[d] += b[d] * c;
  }
}

OccupancyVolume evaluate_field(const FofGrid& fof, const CosineBasis& basis) {
  if (basis.terms() != fof.terms()) {
    throw ShapeError("basis has " + std::to_string(basis.terms()) + " terms, FOF has " +
                     std::to_string(fof.terms()));
  }
  OccupancyVolume vol;
  vol.height = fof.height();
  vol.width = fof.width();
  vol.depth = static_cast<int>(basis.samples());
  vol.z_grid = basis.z_grid();
  const std::size_t depth = basis.samples();
  vol.data.assign(fof.pixel_count() * depth, 0.0);

  const auto pixels = static_cast<std::ptrdiff_t>(fof.pixel_count());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t p = 0; p < pixels; ++p) {
    const auto idx = static_cast<std::size_t>(p);
    if (fof.empty_pixel(idx)) continue;
    evaluate_column(fof.pixel(idx), basis, {vol.data.data() + idx * depth, depth});
  }
  return vol;
}

double evaluate_point(const FofGrid& fof, int x, int y, double z) {
  if (!(z >= -1.0 && z <= 1.0)) throw DomainError("z lies outside [-1, 1]");
  const auto c = fof.coefficients(x, y);
  double sum = 0.0;
  for (int n = 0; n < fof.terms(); ++n) {
    const double cn = c[static_cast<std::size_t>(n)];
    if (cn == 0.0) continue;
    sum += basis_value(n, z) * cn;
  }
  return sum;
}

FofGrid add_relative_noise(const FofGrid& fof, double level, std::uint64_t seed) {
  if (!(level >= 0.0)) throw DomainError("noise level must be non-negative");
  std::vector<double> data = fof.data();
  if (level > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> eps(0.0, level);
    for (double& a : data) a += a * eps(rng);
  }
  return FofGrid(fof.height(), fof.width(), fof.terms(), std::move(data));
}

FofGrid downsample(const FofGrid& fof, int factor) {
  if (factor < 1 || fof.height() % factor != 0 || fof.width() % factor != 0) {
    throw ShapeError("downsample factor " + std::to_string(factor) +
                     " must divide the grid size");
  }
  if (factor == 1) return fof;
  FofGrid out(fof.height() / factor, fof.width() / factor, fof.terms());
  const double weight = 1.0 / static_cast<double>(factor * factor);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      auto dst = out.coefficients(x, y);
      for (int dy = 0; dy < factor; ++dy) {
        for (int dx = 0; dx < factor; ++dx) {
          const auto src = fof.coefficients(x * factor + dx, y * factor + dy);
          for (std::size_t n = 0; n < dst.size(); ++n) dst[n] += src[n];
        }
      }
      for (double& v : dst) v *= weight;
    }
  }
  return out;
}

}  // namespace fofx
