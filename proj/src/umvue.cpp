#include "stein/umvue.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "stein/errors.hpp"
#include "stein/numerics.hpp"

namespace stein {

namespace {

void check_observation(const Observation& obs, const ProblemDims& dims) {
  if (obs.size() != std::size_t(dims.p())) throw DomainError("observation length differs from p");
  if (!(obs.w() > 0.0)) throw DomainError("unbiased estimators need W > 0");
}

}  // namespace

double g_transform(const std::function<double(double)>& h, const ProblemDims& dims, double w, double c0,
                   std::span<const double> kinks) {
  if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("g-transform needs finite W > 0");
  const double half_n = 0.5 * dims.n();
  const double expo = 2.0 / dims.n();
  auto integrand = [&](double s) {
    const double t = w * std::pow(s, -expo);
    if (!std::isfinite(t)) return 0.0;
    return h(t);
  };
  std::vector<double> splits;
  for (double k : kinks)
    if (k > w) splits.push_back(std::pow(w / k, half_n));
  QuadratureOptions opts;
  opts.abs_tol = 1e-300;
  opts.rel_tol = 1e-13;
  opts.max_intervals = 5000;
  const double integral = integrate(integrand, 0.0, 1.0, opts, splits).value;
  return expo * integral + (c0 != 0.0 ? c0 * std::pow(w, half_n) : 0.0);
}

PositivePartConstants positive_part_constants(const ProblemDims& dims) {
  const double p = dims.p();
  const double n = dims.n();
  const double k = dims.js_constant();
  const double kpow = std::pow(k, -0.5 * n);
  return {2.0 * (p / n - k) * kpow, 2.0 * (1.0 / n - 1.0 / (n + 2.0)) * kpow, 4.0 / (n + 2.0) * kpow};
}

GValues g_values_quadrature(const ShrinkageFamily& fam, const ProblemDims& dims, double w) {
  if (!fam.phi_continuous()) throw DomainError("unbiased estimators need a continuous phi");
  const double p = dims.p();
  const double phi_w = fam.phi(w);
  GValues g;
  g.g1 = g_transform([&](double t) { return fam.phi(t) / t; }, dims, w, 0.0, fam.kinks());
  g.g2 = g_transform([&](double t) { return 2.0 * (fam.phi(t) / t - fam.phi_prime(t)); }, dims, w, 0.0,
                     fam.kinks());
  g.g3 = g.g2 + phi_w * phi_w / w;
  g.g = p * g.g1 - g.g2;
  return g;
}

GValues g_values(const ShrinkageFamily& fam, const ProblemDims& dims, double w) {
  if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("g-functions need finite W > 0");
  fam.check_dims(dims);
  if (fam.kind() == FamilyKind::Custom) return g_values_quadrature(fam, dims, w);

  const double p = dims.p();
  const double n = dims.n();
  const double k = fam.constant();
  GValues g;
  if (fam.kind() == FamilyKind::JamesStein || w > k) {
    g.g1 = 2.0 * k / ((n + 2.0) * w);
    g.g2 = 4.0 * k / ((n + 2.0) * w);
    g.g3 = (p + 2.0) * k / ((n + 2.0) * w);
    g.g = 2.0 * (p - 2.0) * k / ((n + 2.0) * w);
  } else {
    const auto c = positive_part_constants(dims);
    const double wpow = std::pow(w, 0.5 * n);
    g.g1 = 2.0 / n - c.c1 * wpow;
    g.g2 = c.c2 * wpow;
    g.g3 = w + c.c2 * wpow;
    g.g = 2.0 * p / n - c.c0 * wpow;
  }
  return g;
}

std::vector<double> unit_axis(const Observation& obs) {
  const double norm = std::sqrt(obs.norm2());
  if (!(norm > 0.0)) throw DomainError("X = 0 has no direction");
  std::vector<double> u(obs.x().begin(), obs.x().end());
  for (double& v : u) v /= norm;
  return u;
}

double umvue_mse(const Observation& obs, const ShrinkageFamily& fam, const ProblemDims& dims) {
  check_observation(obs, dims);
  const double p = dims.p();
  const double n = dims.n();
  const double w = obs.w();
  const double s = obs.s();
  if (fam.kind() == FamilyKind::JamesStein) {
    const double k = fam.constant();
    return p * s / n - k * k * s / w;
  }
  if (fam.kind() == FamilyKind::PositivePart && w <= fam.constant()) {
    fam.check_dims(dims);
    const auto c = positive_part_constants(dims);
    return -p * s / n + s * w + c.c0 * s * std::pow(w, 0.5 * n);
  }
  const GValues g = g_values(fam, dims, w);
  const double phi = fam.phi(w);
  return s * (p / n - g.g + phi * phi / w);
}

AxialMatrix umvue_mse_matrix(const Observation& obs, const ShrinkageFamily& fam, const ProblemDims& dims) {
  check_observation(obs, dims);
  const GValues g = g_values(fam, dims, obs.w());
  return AxialMatrix(obs.s(), 1.0 / dims.n() - g.g1, g.g3, unit_axis(obs));
}

double umvue_risk_reduction(const Observation& obs, const ShrinkageFamily& fam, const ProblemDims& dims) {
  return dims.p() * obs.s() / dims.n() - umvue_mse(obs, fam, dims);
}

AxialMatrix umvue_risk_reduction_matrix(const Observation& obs, const ShrinkageFamily& fam,
                                        const ProblemDims& dims) {
  check_observation(obs, dims);
  const GValues g = g_values(fam, dims, obs.w());
  return AxialMatrix(obs.s(), g.g1, -g.g3, unit_axis(obs));
}

}  // namespace stein
