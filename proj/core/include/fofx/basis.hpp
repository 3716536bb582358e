#pragma once

#include <span>
#include <vector>

namespace fofx {

/// Value of the n-th cosine basis function at z in [-1, 1]: 1/2 for n = 0,
/// cos(n*pi*(z+1)/2) otherwise. The 1/2 of the constant term lives here so
/// that a reconstruction is a plain dot product with [a_0, a_1, ...].
double basis_value(int n, double z);

/// D x N table of basis values sampled on a z-grid.
class CosineBasis {
 public:
  /// Throws DomainError for z outside [-1, 1] and for terms < 1.
  CosineBasis(int terms, std::vector<double> z_grid);

  int terms() const noexcept { return terms_; }
  std::size_t samples() const noexcept { return z_.size(); }
  const std::vector<double>& z_grid() const noexcept { return z_; }

  double operator()(std::size_t d, int n) const { return by_term_[static_cast<std::size_t>(n) * z_.size() + d]; }

  /// Values of term n at every sample, contiguous over d.
  std::span<const double> term(int n) const {
    return {by_term_.data() + static_cast<std::size_t>(n) * z_.size(), z_.size()};
  }

 private:
  int terms_;
  std::vector<double> z_;
  std::vector<double> by_term_;  // N x D, sample index fastest
};

CosineBasis make_basis(int terms, std::vector<double> z_grid);

/// Cell-centered samples z_d = -1 + 2(d + 1/2)/D, the same convention as
/// pixel centers in x and y.
std::vector<double> cell_centered_grid(int samples);

/// Evaluates sum_n c_n * basis_value(n, z) with the Clenshaw recurrence.
/// Accepts z outside [-1, 1] (the even periodic extension).
double cosine_series(std::span<const double> coefficients, double z);

}  // namespace fofx
