#include "stein/confidence.hpp"

#include <cmath>
#include <numbers>

#include "stein/distributions.hpp"
#include "stein/errors.hpp"

namespace stein {

std::string_view to_string(ConfidenceVariant v) {
  switch (v) {
    case ConfidenceVariant::C0: return "c0";
    case ConfidenceVariant::C1: return "c1";
    case ConfidenceVariant::C2: return "c2";
    case ConfidenceVariant::C3: return "c3";
    case ConfidenceVariant::C1Star: return "c1-star";
    case ConfidenceVariant::C2Star: return "c2-star";
  }
  return "?";
}

std::optional<ConfidenceVariant> parse_confidence_variant(std::string_view name) {
  for (auto v : kAllConfidenceVariants)
    if (to_string(v) == name) return v;
  if (name == "c1star" || name == "c1*") return ConfidenceVariant::C1Star;
  if (name == "c2star" || name == "c2*") return ConfidenceVariant::C2Star;
  return std::nullopt;
}

MatrixEstimatorKind ConfidenceSpec::matrix_kind() const {
  switch (variant) {
    case ConfidenceVariant::C1:
    case ConfidenceVariant::C1Star: return MatrixEstimatorKind::Xi1TREta1;
    case ConfidenceVariant::C2:
    case ConfidenceVariant::C2Star: return MatrixEstimatorKind::Xi2TREta2;
    default: return MatrixEstimatorKind::Umvue;
  }
}

bool ConfidenceResult::contains(std::span<const double> theta) const {
  if (theta.size() != center.size()) throw DomainError("theta length differs from the set dimension");
  std::vector<double> d(center.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = center[i] - theta[i];
  return quad_form_inv(shape, d) <= quadratic_radius;
}

double quad_form_inv(const AxialMatrix& m, std::span<const double> d) { return m.quad_form_inv(d); }

double log_ellipsoid_volume(const AxialMatrix& m, double c) {
  if (!(c > 0.0)) throw DomainError("ellipsoid threshold must be positive");
  const double p = double(m.dim());
  return 0.5 * m.log_determinant() + 0.5 * p * std::log(c * p * std::numbers::pi) - std::lgamma(0.5 * p + 1.0);
}

double ellipsoid_volume(const AxialMatrix& m, double c) { return std::exp(log_ellipsoid_volume(m, c)); }

ConfidenceResult build_confidence_set(const ConfidenceSpec& spec, const Observation& obs, const ShrinkageFamily& fam,
                                      const ProblemDims& dims, const MatrixConstants* consts,
                                      std::optional<std::span<const double>> theta) {
  if (!(spec.level > 0.0 && spec.level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
  if (obs.size() != std::size_t(dims.p())) throw DomainError("observation length differs from p");
  const double p = dims.p();
  const double n = dims.n();
  const double c = spec.critical_value ? *spec.critical_value : f_quantile(spec.level, dims.p(), dims.n());
  if (!(c > 0.0)) throw DomainError("critical value must be positive");

  const auto x = obs.x();
  std::vector<double> axis(x.begin(), x.end());
  if (obs.norm2() == 0.0) {
    axis.assign(x.size(), 0.0);
    axis[0] = 1.0;
  }
  const AxialMatrix isotropic(obs.s(), 1.0 / n, 0.0, axis);

  ConfidenceResult out{{}, 0.0, isotropic, 0.0, std::nullopt, std::nullopt};
  const auto v = spec.variant;
  if (v == ConfidenceVariant::C0) {
    out.center.assign(x.begin(), x.end());
  } else {
    out.center = apply_estimator(obs, fam, dims).value;
  }

  double threshold = c;
  if (v != ConfidenceVariant::C0 && v != ConfidenceVariant::C3) {
    out.shape = estimate_mse_matrix(spec.matrix_kind(), obs, fam, dims, consts);
    const double lmin = out.shape.min_eigenvalue();
    if (!(lmin > 0.0)) throw NotPositiveDefinite(lmin);
    if (v == ConfidenceVariant::C1Star || v == ConfidenceVariant::C2Star)
      threshold = std::exp(std::log(obs.s() / n) + std::log(c) - out.shape.log_determinant() / p);
  }
  out.quadratic_radius = p * threshold;
  out.volume = ellipsoid_volume(out.shape, threshold);

  if (theta) {
    if (theta->size() != out.center.size()) throw DomainError("theta length differs from p");
    std::vector<double> d(out.center.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = out.center[i] - (*theta)[i];
    out.quadratic_form = quad_form_inv(out.shape, d);
    out.contains_truth = *out.quadratic_form <= out.quadratic_radius;
  }
  return out;
}

}  // namespace stein
