#pragma once

#include <span>
#include <vector>

namespace stein {

/// Symmetric p x p matrix  scale * (iso * I + axial * u u')  with unit axis u.
///
/// Every matrix estimator in the library has this shape, so storage,
/// determinant and inverse quadratic forms are O(p).
class AxialMatrix {
 public:
  /// `axis` is normalized; throws DomainError if it is zero or scale <= 0.
  AxialMatrix(double scale, double iso, double axial, std::vector<double> axis);

  /// Built from the eigenvalue factors along the axis (l0) and across it (l1).
  static AxialMatrix from_eigen(double scale, double along, double across, std::vector<double> axis);

  std::size_t dim() const { return axis_.size(); }
  double scale() const { return scale_; }
  double iso() const { return iso_; }
  double axial() const { return axial_; }
  std::span<const double> axis() const { return axis_; }

  /// Eigenvalue for the axis direction, multiplicity one.
  double eigenvalue_along() const { return scale_ * (iso_ + axial_); }
  /// Eigenvalue orthogonal to the axis, multiplicity p - 1.
  double eigenvalue_across() const { return scale_ * iso_; }
  double min_eigenvalue() const;
  bool positive_definite() const { return min_eigenvalue() > 0.0; }

  double trace() const;
  double determinant() const;
  /// Throws NotPositiveDefinite.
  double log_determinant() const;

  /// v' M v.
  double quad_form(std::span<const double> v) const;
  /// v' M^{-1} v; throws NotPositiveDefinite.
  double quad_form_inv(std::span<const double> v) const;

  /// Row-major dense copy.
  std::vector<double> to_dense() const;

  /// (scale / n) I - M, kept in the same scale.
  AxialMatrix complement(double n) const;

 private:
  double scale_;
  double iso_;
  double axial_;
  std::vector<double> axis_;
};

}  // namespace stein
