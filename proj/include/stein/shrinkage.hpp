#pragma once

// Shrinkage estimators (1 - phi(W)/W) X of a multivariate normal mean.

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stein/problem.hpp"
#include "stein/random.hpp"

namespace stein {

enum class FamilyKind { JamesStein, PositivePart, Custom };

/// A shrinkage rule phi(W) with its derivative.
///
/// The positive-part rule uses phi(W) = min(W, k), k = (p-2)/(n+2), which is
/// what the factor max(0, 1 - k/W) requires; its derivative is taken as 0 at
/// the kink W = k.
class ShrinkageFamily {
 public:
  using Fn = std::function<double(double)>;

  static ShrinkageFamily james_stein(const ProblemDims& dims);
  static ShrinkageFamily positive_part(const ProblemDims& dims);
  /// `kinks` lists points where phi' jumps; quadrature splits there.
  static ShrinkageFamily custom(std::string name, Fn phi, Fn phi_prime, bool phi_continuous,
                                bool phi_prime_continuous, std::vector<double> kinks = {});
  /// phi == 0, i.e. the unbiased estimator X itself.
  static ShrinkageFamily identity();

  FamilyKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double phi(double w) const;
  double phi_prime(double w) const;
  bool phi_continuous() const { return phi_continuous_; }
  bool phi_prime_continuous() const { return phi_prime_continuous_; }
  /// k = (p-2)/(n+2) for the built-in rules; NaN for custom rules.
  double constant() const { return k_; }
  std::span<const double> kinks() const { return kinks_; }

  /// Throws DomainError if a built-in rule was made for different dimensions.
  void check_dims(const ProblemDims& dims) const;

 private:
  ShrinkageFamily() = default;

  FamilyKind kind_ = FamilyKind::Custom;
  std::string name_;
  Fn phi_;
  Fn phi_prime_;
  bool phi_continuous_ = true;
  bool phi_prime_continuous_ = true;
  double k_ = 0.0;
  std::vector<double> kinks_;
};

struct ShrunkEstimate {
  std::vector<double> value;
  /// Set when W = 0 and phi(0) != 0, where phi(W)/W diverges; value is then zero.
  bool shrunk_to_origin = false;
};

ShrunkEstimate apply_estimator(const Observation& obs, const ShrinkageFamily& fam,
                               const ProblemDims& dims);

/// Regression Y = A beta + e mapped onto (X, S) with B = (A'A)^{1/2}.
struct CanonicalForm {
  Observation obs;
  ProblemDims dims;
  Eigen::MatrixXd basis;  // B, symmetric square root of A'A
};

/// Throws DomainError for a rank-deficient design or N <= p.
CanonicalForm canonicalize_regression(const Eigen::MatrixXd& design, const Eigen::VectorXd& response);

/// beta = B^{-1} delta, mapping a canonical estimate back to coefficients.
Eigen::VectorXd coefficients_from_canonical(const Eigen::MatrixXd& basis, std::span<const double> delta);

/// p - (2(p-2)phi/W - (n+2)phi^2/W + 4phi' + 4 phi phi'), the per-draw risk
/// in units of sigma^2.
double risk_identity_integrand(const ShrinkageFamily& fam, const ProblemDims& dims, double w);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo risk R(delta_phi)/sigma^2 at noncentrality lambda using the
/// risk identity. Replication r reads stream rng.with_stream(r).
McEstimate true_risk(const ShrinkageFamily& fam, const ProblemDims& dims, double lambda,
                     std::uint64_t reps, const RngStream& rng, unsigned threads = 1);

/// Draws W = ||X||^2 / S at sigma^2 = 1 for noncentrality lambda.
double sample_w(const ProblemDims& dims, double lambda, CounterRng& rng);

}  // namespace stein
