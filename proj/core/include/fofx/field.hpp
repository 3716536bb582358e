#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fofx/basis.hpp"

namespace fofx {

/// H x W grid of N cosine coefficients per pixel, row-major with the
/// coefficient index fastest. Pixel (x, y) is centered at
/// (cell_center(x, W), cell_center(y, H)).
class FofGrid {
 public:
  /// All-zero grid. Throws ShapeError unless H, W, N >= 1.
  FofGrid(int height, int width, int terms);
  /// Throws ShapeError on a size mismatch and DomainError on non-finite data.
  FofGrid(int height, int width, int terms, std::vector<double> data);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int terms() const noexcept { return terms_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  }

  std::span<const double> coefficients(int x, int y) const;
  std::span<double> coefficients(int x, int y);
  std::span<const double> pixel(std::size_t index) const {
    return {data_.data() + index * static_cast<std::size_t>(terms_), static_cast<std::size_t>(terms_)};
  }
  std::span<double> pixel(std::size_t index) {
    return {data_.data() + index * static_cast<std::size_t>(terms_), static_cast<std::size_t>(terms_)};
  }

  /// True when every coefficient of the pixel is exactly zero.
  bool empty_pixel(std::size_t index) const;

  const std::vector<double>& data() const noexcept { return data_; }

 private:
  int height_;
  int width_;
  int terms_;
  std::vector<double> data_;
};

/// H x W x D sampled reconstruction; values are unconstrained reals.
struct OccupancyVolume {
  int height = 0;
  int width = 0;
  int depth = 0;
  std::vector<double> z_grid;
  std::vector<double> data;  // ((y * W) + x) * D + d

  double at(int x, int y, int d) const {
    return data[(static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                 static_cast<std::size_t>(x)) * static_cast<std::size_t>(depth) +
                static_cast<std::size_t>(d)];
  }
};

/// data[y][x][d] = sum_n B[d][n] * C[y][x][n]. The accumulation order over n
/// is fixed per sample, so a sample's value does not depend on which other
/// samples share the grid. Throws ShapeError when basis and grid disagree on N.
OccupancyVolume evaluate_field(const FofGrid& fof, const CosineBasis& basis);

/// Writes the reconstruction of one pixel column into `out` (size D).
void evaluate_column(std::span<const double> coefficients, const CosineBasis& basis,
                     std::span<double> out);

/// Single-sample reconstruction. Throws IndexError / DomainError.
double evaluate_point(const FofGrid& fof, int x, int y, double z);

/// Multiplies every coefficient a by (1 + eps), eps ~ Normal(0, level^2).
FofGrid add_relative_noise(const FofGrid& fof, double level, std::uint64_t seed);

/// Box-filters the grid down by an integer factor in x and y. Coefficients are
/// linear in the occupancy, so this is the FOF of the area-averaged occupancy.
FofGrid downsample(const FofGrid& fof, int factor);

}  // namespace fofx
