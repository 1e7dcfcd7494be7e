#pragma once

// Confidence ellipsoids {theta : (c - theta)' M^{-1} (c - theta) <= p t}
// centered at X or at a shrinkage estimate.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "stein/axial_matrix.hpp"
#include "stein/matrix_improved.hpp"
#include "stein/problem.hpp"
#include "stein/shrinkage.hpp"

namespace stein {

/// C0: center X, shape (S/n) I.  C3: center delta, shape (S/n) I.
/// C1 / C2: center delta, shape from Xi1TREta1 / Xi2TREta2.
/// C1Star / C2Star: as C1 / C2 with the threshold rescaled so that the volume
/// equals that of C0.
enum class ConfidenceVariant { C0, C1, C2, C3, C1Star, C2Star };

inline constexpr ConfidenceVariant kAllConfidenceVariants[] = {
    ConfidenceVariant::C0, ConfidenceVariant::C1,     ConfidenceVariant::C2,
    ConfidenceVariant::C3, ConfidenceVariant::C1Star, ConfidenceVariant::C2Star};

std::string_view to_string(ConfidenceVariant v);
std::optional<ConfidenceVariant> parse_confidence_variant(std::string_view name);

struct ConfidenceSpec {
  ConfidenceVariant variant = ConfidenceVariant::C0;
  double level = 0.95;
  /// Overrides the F quantile; used by callers that evaluate many sets.
  std::optional<double> critical_value{};

  /// The matrix estimator the variant is bound to (Umvue for C0 / C3).
  MatrixEstimatorKind matrix_kind() const;
};

struct ConfidenceResult {
  std::vector<double> center;
  /// Threshold on (center - theta)' M^{-1} (center - theta).
  double quadratic_radius = 0.0;
  AxialMatrix shape;
  double volume = 0.0;
  std::optional<bool> contains_truth;
  /// (center - theta)' M^{-1} (center - theta), when theta is given.
  std::optional<double> quadratic_form;

  bool contains(std::span<const double> theta) const;
};

/// d' M^{-1} d; throws NotPositiveDefinite.
double quad_form_inv(const AxialMatrix& m, std::span<const double> d);

/// Volume of {d : d' M^{-1} d <= c p} = |M|^{1/2} (c p pi)^{p/2} / Gamma(p/2 + 1).
double ellipsoid_volume(const AxialMatrix& m, double c);
double log_ellipsoid_volume(const AxialMatrix& m, double c);

/// C1 / C2 variants need matrix constants with a positive-definite
/// certificate; throws NotPositiveDefinite if the assembled shape is not.
ConfidenceResult build_confidence_set(const ConfidenceSpec& spec, const Observation& obs, const ShrinkageFamily& fam,
                                      const ProblemDims& dims, const MatrixConstants* consts = nullptr,
                                      std::optional<std::span<const double>> theta = std::nullopt);

}  // namespace stein
