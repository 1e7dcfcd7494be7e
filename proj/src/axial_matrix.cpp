#include "stein/axial_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stein/errors.hpp"

namespace stein {

AxialMatrix::AxialMatrix(double scale, double iso, double axial, std::vector<double> axis)
    : scale_(scale), iso_(iso), axial_(axial), axis_(std::move(axis)) {
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) throw DomainError("matrix scale must be positive");
  if (!std::isfinite(iso_) || !std::isfinite(axial_)) throw DomainError("matrix coefficients must be finite");
  const double norm = std::sqrt(std::inner_product(axis_.begin(), axis_.end(), axis_.begin(), 0.0));
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("matrix axis must be a nonzero finite vector");
  for (double& a : axis_) a /= norm;
}

AxialMatrix AxialMatrix::from_eigen(double scale, double along, double across, std::vector<double> axis) {
  return AxialMatrix(scale, across, along - across, std::move(axis));
}

double AxialMatrix::min_eigenvalue() const {
  if (dim() == 1) return eigenvalue_along();
  return std::min(eigenvalue_along(), eigenvalue_across());
}

double AxialMatrix::trace() const { return scale_ * (double(dim()) * iso_ + axial_); }

double AxialMatrix::determinant() const {
  return std::pow(eigenvalue_across(), double(dim() - 1)) * eigenvalue_along();
}

double AxialMatrix::log_determinant() const {
  const double lmin = min_eigenvalue();
  if (!(lmin > 0.0)) throw NotPositiveDefinite(lmin);
  return double(dim() - 1) * std::log(eigenvalue_across()) + std::log(eigenvalue_along());
}

static void check_length(std::size_t expected, std::size_t got) {
  if (expected != got) throw DomainError("vector length differs from matrix dimension");
}

double AxialMatrix::quad_form(std::span<const double> v) const {
  check_length(dim(), v.size());
  const double along = std::inner_product(v.begin(), v.end(), axis_.begin(), 0.0);
  const double norm2 = std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
  return scale_ * (iso_ * norm2 + axial_ * along * along);
}

double AxialMatrix::quad_form_inv(std::span<const double> v) const {
  check_length(dim(), v.size());
  const double lmin = min_eigenvalue();
  if (!(lmin > 0.0)) throw NotPositiveDefinite(lmin);
  const double along = std::inner_product(v.begin(), v.end(), axis_.begin(), 0.0);
  const double norm2 = std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
  const double across2 = std::max(0.0, norm2 - along * along);
  const double q_across = dim() > 1 ? across2 / eigenvalue_across() : 0.0;
  return q_across + along * along / eigenvalue_along();
}

std::vector<double> AxialMatrix::to_dense() const {
  const std::size_t p = dim();
  std::vector<double> out(p * p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      out[i * p + j] = scale_ * ((i == j ? iso_ : 0.0) + axial_ * axis_[i] * axis_[j]);
  return out;
}

AxialMatrix AxialMatrix::complement(double n) const {
  return AxialMatrix(scale_, 1.0 / n - iso_, -axial_, axis_);
}

}  // namespace stein
