#include "stein/mse_improved.hpp"

#include <algorithm>
#include <cmath>

#include "stein/distributions.hpp"
#include "stein/errors.hpp"
#include "stein/numerics.hpp"
#include "stein/umvue.hpp"

namespace stein {

std::string_view to_string(MseEstimatorKind kind) {
  switch (kind) {
    case MseEstimatorKind::Umvue: return "umvue";
    case MseEstimatorKind::TruncatedZero: return "truncated-zero";
    case MseEstimatorKind::Psi0: return "psi0";
    case MseEstimatorKind::Psi1: return "psi1";
    case MseEstimatorKind::Psi2: return "psi2";
    case MseEstimatorKind::Psi1TR: return "psi1-tr";
    case MseEstimatorKind::Psi2TR: return "psi2-tr";
  }
  return "?";
}

std::optional<MseEstimatorKind> parse_mse_kind(std::string_view name) {
  for (auto k : kAllMseKinds)
    if (to_string(k) == name) return k;
  return std::nullopt;
}

std::string_view to_string(ConstantsMethod method) {
  switch (method) {
    case ConstantsMethod::ClosedForm: return "closed-form";
    case ConstantsMethod::MonteCarlo: return "monte-carlo";
    case ConstantsMethod::Quadrature: return "quadrature";
  }
  return "?";
}

double a_of_w(const ShrinkageFamily& fam, const ProblemDims& dims, double w) {
  if (!(w > 0.0)) throw DomainError("a(W) needs W > 0");
  const double p = dims.p();
  const double n = dims.n();
  if (fam.kind() == FamilyKind::JamesStein) {
    fam.check_dims(dims);
    const double k = fam.constant();
    return n * k * k / (p * w);
  }
  const double phi = fam.phi(w);
  return (n / p) * (g_values(fam, dims, w).g - phi * phi / w);
}

double alpha_js(const ProblemDims& dims) { return dims.n() * (dims.p() - 2.0) / (dims.n() + 2.0); }

AlphaEstimate alpha_pn(const ShrinkageFamily& fam, const ProblemDims& dims, std::uint64_t reps,
                       const RngStream& rng, unsigned threads) {
  fam.check_dims(dims);
  if (fam.kind() == FamilyKind::JamesStein) return {alpha_js(dims), 0.0, {ConstantsMethod::ClosedForm, 0}};
  const McEstimate r = true_risk(fam, dims, 0.0, reps, rng, threads);
  return {dims.p() - r.value, r.std_error, {ConstantsMethod::MonteCarlo, reps}};
}

AlphaEstimate alpha_pn_quadrature(const ShrinkageFamily& fam, const ProblemDims& dims) {
  fam.check_dims(dims);
  const double risk = expect_chi2_ratio([&](double w) { return risk_identity_integrand(fam, dims, w); },
                                        dims.p(), dims.n(), fam.kinks());
  return {dims.p() - risk, 0.0, {ConstantsMethod::Quadrature, 0}};
}

double solve_w_pn(const ShrinkageFamily& fam, const ProblemDims& dims, double alpha) {
  const double p = dims.p();
  const double n = dims.n();
  if (!(alpha > 0.0 && alpha < p)) throw DomainError("alpha must lie in (0, p)");
  const double target = p * (n + p + 2.0) / (n * alpha);
  auto f = [&](double w) { return (1.0 + w) / a_of_w(fam, dims, w) - target; };
  const auto root = bisect_expanding(f, 1e-8, (p + 2.0) / n + 10.0);
  if (!root) throw NumericalError("no sign change found for the W_pn equation");
  return *root;
}

double w_pn_js(const ProblemDims& dims) {
  const double p = dims.p();
  const double n = dims.n();
  const double zeta = (n + p + 2.0) * (p - 2.0) / (n * (n + 2.0));
  return 2.0 * zeta / (1.0 + std::sqrt(1.0 + 4.0 * zeta));
}

double gamma_pn(const ProblemDims& dims, double w_pn) {
  if (!(w_pn > 0.0)) throw DomainError("W_pn must be positive");
  return dims.n() * (1.0 + w_pn) / (dims.n() + dims.p() + 2.0);
}

ShrinkageConstants shrinkage_constants(const ShrinkageFamily& fam, const ProblemDims& dims,
                                       const AlphaEstimate& alpha) {
  ShrinkageConstants c;
  c.alpha = alpha.value;
  c.alpha_stderr = alpha.std_error;
  c.provenance = alpha.provenance;
  c.w_pn = fam.kind() == FamilyKind::JamesStein ? w_pn_js(dims) : solve_w_pn(fam, dims, alpha.value);
  c.gamma = gamma_pn(dims, c.w_pn);
  return c;
}

double mse_upper_cap(const Observation& obs, const ProblemDims& dims) {
  return dims.p() * obs.s() * (1.0 + obs.w()) / (dims.n() + dims.p() + 2.0);
}

double estimate_mse(MseEstimatorKind kind, const Observation& obs, const ShrinkageFamily& fam,
                    const ProblemDims& dims, const ShrinkageConstants* consts) {
  const double r0 = umvue_mse(obs, fam, dims);
  const double p = dims.p();
  const double base = p * obs.s() / dims.n();
  auto need = [&]() -> const ShrinkageConstants& {
    if (!consts) throw MissingConstants(std::string(to_string(kind)) + " needs alpha, W_pn and gamma");
    return *consts;
  };
  switch (kind) {
    case MseEstimatorKind::Umvue: return r0;
    case MseEstimatorKind::TruncatedZero: return std::max(0.0, r0);
    case MseEstimatorKind::Psi0: return std::min(std::max(r0, 0.0), mse_upper_cap(obs, dims));
    case MseEstimatorKind::Psi1:
    case MseEstimatorKind::Psi1TR: {
      const auto& c = need();
      const double v = std::max(r0, base * (1.0 - c.gamma * c.alpha / p));
      return kind == MseEstimatorKind::Psi1 ? v : std::min(v, mse_upper_cap(obs, dims));
    }
    case MseEstimatorKind::Psi2:
    case MseEstimatorKind::Psi2TR: {
      const auto& c = need();
      const double v = std::max(r0, base * (1.0 - c.alpha / p));
      return kind == MseEstimatorKind::Psi2 ? v : std::min(v, mse_upper_cap(obs, dims));
    }
  }
  return r0;
}

double estimate_risk_reduction(MseEstimatorKind kind, const Observation& obs, const ShrinkageFamily& fam,
                               const ProblemDims& dims, const ShrinkageConstants* consts) {
  return dims.p() * obs.s() / dims.n() - estimate_mse(kind, obs, fam, dims, consts);
}

bool psi1_positive_certified(const ShrinkageConstants& consts, const ProblemDims& dims) {
  return consts.gamma * consts.conservative_alpha() < dims.p();
}

bool truncation_set_nonempty(const ShrinkageFamily& fam, const ProblemDims& dims) {
  const double p = dims.p();
  const double n = dims.n();
  for (int i = 0; i <= 2000; ++i) {
    const double w = std::pow(10.0, -6.0 + 10.0 * i / 2000.0);
    const double a = a_of_w(fam, dims, w);
    if (!(a > 0.0)) continue;
    if ((1.0 / a) * (1.0 - n * (1.0 + w) / (n + p + 2.0)) >= 1.0) return true;
  }
  return false;
}

}  // namespace stein
