#include "fofx/basis.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fofx/errors.hpp"
#include "fofx/geometry.hpp"

namespace fofx {

double basis_value(int n, double z) {
  if (n == 0) return 0.5;
  return std::cos(static_cast<double>(n) * std::numbers::pi * (z + 1.0) * 0.5);
}

CosineBasis::CosineBasis(int terms, std::vector<double> z_grid)
    : terms_(terms), z_(std::move(z_grid)) {
  if (terms_ < 1) throw DomainError("basis needs at least one term");
  for (double z : z_) {
    if (!(z >= -1.0 && z <= 1.0)) {
      throw DomainError("z sample " + std::to_string(z) + " lies outside [-1, 1]");
    }
  }
  by_term_.resize(static_cast<std::size_t>(terms_) * z_.size());
  for (int n = 0; n < terms_; ++n) {
    for (std::size_t d = 0; d < z_.size(); ++d) {
      by_term_[static_cast<std::size_t>(n) * z_.size() + d] = basis_value(n, z_[d]);
    }
  }
}

CosineBasis make_basis(int terms, std::vector<double> z_grid) {
  return CosineBasis(terms, std::move(z_grid));
}

std::vector<double> cell_centered_grid(int samples) {
  if (samples < 1) throw DomainError("z-grid needs at least one sample");
  std::vector<double> z(static_cast<std::size_t>(samples));
  for (int d = 0; d < samples; ++d) z[static_cast<std::size_t>(d)] = cell_center(d, samples);
  return z;
}

double cosine_series(std::span<const double> c, double z) {
  if (c.empty()) return 0.0;
  const double x = std::cos(std::numbers::pi * (z + 1.0) * 0.5);
  const double two_x = 2.0 * x;
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t k = c.size() - 1; k >= 1; --k) {
    const double b0 = c[k] + two_x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return 0.5 * c[0] + x * b1 - b2;
}

}  // namespace fofx
