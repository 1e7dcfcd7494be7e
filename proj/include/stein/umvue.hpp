#pragma once

// Unbiased estimators of the MSE (scalar and matrix) of a shrinkage rule.

#include <functional>
#include <span>

#include "stein/axial_matrix.hpp"
#include "stein/problem.hpp"
#include "stein/shrinkage.hpp"

namespace stein {

struct GValues {
  double g1 = 0.0;
  double g2 = 0.0;
  double g3 = 0.0;  // g2 + phi^2 / W
  double g = 0.0;   // p g1 - g2
};

/// g(w) = w^{n/2} int_w^inf t^{-n/2} h(t) / t dt + c0 w^{n/2}.
///
/// Evaluated as (2/n) int_0^1 h(w s^{-2/n}) ds, which is bounded for
/// bounded h. Kinks of h (in t) are passed through as split points.
double g_transform(const std::function<double(double)>& h, const ProblemDims& dims, double w,
                   double c0 = 0.0, std::span<const double> kinks = {});

/// Closed forms for the built-in rules, quadrature for custom ones.
/// Throws DomainError for w <= 0 or a discontinuous phi.
GValues g_values(const ShrinkageFamily& fam, const ProblemDims& dims, double w);

/// Always by quadrature (used to cross-check the closed forms).
GValues g_values_quadrature(const ShrinkageFamily& fam, const ProblemDims& dims, double w);

/// Constants of the positive-part closed forms on W <= k:
/// g1 = 2/n - c1 W^{n/2}, g3 = W + c2 W^{n/2}, R/S = W - p/n + c0 W^{n/2}.
struct PositivePartConstants {
  double c0;
  double c1;
  double c2;
};
PositivePartConstants positive_part_constants(const ProblemDims& dims);

/// Unbiased estimate of E||delta - theta||^2.
double umvue_mse(const Observation& obs, const ShrinkageFamily& fam, const ProblemDims& dims);

/// Unbiased estimate of E(delta - theta)(delta - theta)':
/// S [(1/n - g1) I + g3 u u'], u = X / ||X||.
AxialMatrix umvue_mse_matrix(const Observation& obs, const ShrinkageFamily& fam, const ProblemDims& dims);

/// Unbiased estimate of R(X) - R(delta) = p sigma^2 - R(delta).
double umvue_risk_reduction(const Observation& obs, const ShrinkageFamily& fam, const ProblemDims& dims);

/// Unbiased estimate of sigma^2 I - M(delta): S [g1 I - g3 u u'].
AxialMatrix umvue_risk_reduction_matrix(const Observation& obs, const ShrinkageFamily& fam,
                                        const ProblemDims& dims);

/// u = X / ||X||; throws DomainError for X = 0.
std::vector<double> unit_axis(const Observation& obs);

}  // namespace stein
