#pragma once

// Improved estimators of the scalar MSE R(delta) and of the risk reduction
// p sigma^2 - R(delta).

#include <cstdint>
#include <optional>
#include <string_view>

#include "stein/problem.hpp"
#include "stein/random.hpp"
#include "stein/shrinkage.hpp"

namespace stein {

enum class MseEstimatorKind { Umvue, TruncatedZero, Psi0, Psi1, Psi2, Psi1TR, Psi2TR };

inline constexpr MseEstimatorKind kAllMseKinds[] = {
    MseEstimatorKind::Umvue, MseEstimatorKind::TruncatedZero, MseEstimatorKind::Psi0,  MseEstimatorKind::Psi1,
    MseEstimatorKind::Psi2,  MseEstimatorKind::Psi1TR,        MseEstimatorKind::Psi2TR};

std::string_view to_string(MseEstimatorKind kind);
std::optional<MseEstimatorKind> parse_mse_kind(std::string_view name);

enum class ConstantsMethod { ClosedForm, MonteCarlo, Quadrature };
std::string_view to_string(ConstantsMethod method);

struct Provenance {
  ConstantsMethod method = ConstantsMethod::ClosedForm;
  std::uint64_t reps = 0;  // Monte Carlo only
};

struct AlphaEstimate {
  double value = 0.0;
  double std_error = 0.0;
  Provenance provenance;
};

/// alpha = R*(delta)/sigma^2 at lambda = 0, the root W_pn of
/// (1+W)/a(W) = p(n+p+2)/(n alpha), and gamma = n(1+W_pn)/(n+p+2).
struct ShrinkageConstants {
  double alpha = 0.0;
  double alpha_stderr = 0.0;
  double w_pn = 0.0;
  double gamma = 0.0;
  Provenance provenance;

  /// alpha + 3 stderr, used for positivity certificates.
  double conservative_alpha() const { return alpha + 3.0 * alpha_stderr; }
};

/// a(W) = (n/p)(g(W) - phi(W)^2/W), so that the UMVUE is pS(1 - a(W))/n.
double a_of_w(const ShrinkageFamily& fam, const ProblemDims& dims, double w);

/// n(p-2)/(n+2).
double alpha_js(const ProblemDims& dims);

/// Closed form for James-Stein; otherwise p - true_risk(lambda = 0) by Monte Carlo.
AlphaEstimate alpha_pn(const ShrinkageFamily& fam, const ProblemDims& dims, std::uint64_t reps,
                       const RngStream& rng, unsigned threads = 1);

/// p - E[risk integrand] at lambda = 0 by deterministic quadrature.
AlphaEstimate alpha_pn_quadrature(const ShrinkageFamily& fam, const ProblemDims& dims);

/// Root of (1+W)/a(W) = p(n+p+2)/(n alpha) by bracketed bisection.
double solve_w_pn(const ShrinkageFamily& fam, const ProblemDims& dims, double alpha);

/// James-Stein root of W(1+W) = (n+p+2)(p-2)/(n(n+2)).
double w_pn_js(const ProblemDims& dims);

double gamma_pn(const ProblemDims& dims, double w_pn);

ShrinkageConstants shrinkage_constants(const ShrinkageFamily& fam, const ProblemDims& dims, const AlphaEstimate& alpha);

/// pS(1+W)/(n+p+2), the admissibility cap.
double mse_upper_cap(const Observation& obs, const ProblemDims& dims);

/// Psi1, Psi2 and their TR versions need `consts`; throws MissingConstants otherwise.
double estimate_mse(MseEstimatorKind kind, const Observation& obs, const ShrinkageFamily& fam,
                    const ProblemDims& dims, const ShrinkageConstants* consts = nullptr);

/// pS/n - estimate_mse(...).
double estimate_risk_reduction(MseEstimatorKind kind, const Observation& obs, const ShrinkageFamily& fam,
                               const ProblemDims& dims, const ShrinkageConstants* consts = nullptr);

/// gamma * alpha < p with alpha taken conservatively.
bool psi1_positive_certified(const ShrinkageConstants& consts, const ProblemDims& dims);

/// Whether some W has (1/a(W))(1 - n(1+W)/(n+p+2)) >= 1, the condition under
/// which Psi0 also improves on max(0, UMVUE). Scanned on a log grid.
bool truncation_set_nonempty(const ShrinkageFamily& fam, const ProblemDims& dims);

}  // namespace stein
