#include "stein/shrinkage.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "stein/errors.hpp"
#include "stein/parallel.hpp"

namespace stein {

ProblemDims::ProblemDims(int p, int n) : p_(p), n_(n) {
  if (p < 3) throw DomainError("shrinkage requires p >= 3, got p = " + std::to_string(p));
  if (n < 1) throw DomainError("residual degrees of freedom must satisfy n >= 1, got n = " + std::to_string(n));
}

Observation::Observation(std::vector<double> x, double s) : x_(std::move(x)), s_(s) {
  if (x_.empty()) throw DomainError("observation vector is empty");
  if (!(s_ > 0.0) || !std::isfinite(s_)) throw DomainError("scale statistic S must be positive and finite");
  norm2_ = std::inner_product(x_.begin(), x_.end(), x_.begin(), 0.0);
  if (!std::isfinite(norm2_)) throw DomainError("observation vector is not finite");
}

ShrinkageFamily ShrinkageFamily::james_stein(const ProblemDims& dims) {
  ShrinkageFamily f;
  f.kind_ = FamilyKind::JamesStein;
  f.name_ = "js";
  f.k_ = dims.js_constant();
  return f;
}

ShrinkageFamily ShrinkageFamily::positive_part(const ProblemDims& dims) {
  ShrinkageFamily f;
  f.kind_ = FamilyKind::PositivePart;
  f.name_ = "js-plus";
  f.k_ = dims.js_constant();
  f.phi_prime_continuous_ = false;
  f.kinks_ = {f.k_};
  return f;
}

ShrinkageFamily ShrinkageFamily::custom(std::string name, Fn phi, Fn phi_prime, bool phi_continuous,
                                        bool phi_prime_continuous, std::vector<double> kinks) {
  if (!phi || !phi_prime) throw DomainError("custom shrinkage family needs phi and phi'");
  ShrinkageFamily f;
  f.kind_ = FamilyKind::Custom;
  f.name_ = std::move(name);
  f.phi_ = std::move(phi);
  f.phi_prime_ = std::move(phi_prime);
  f.phi_continuous_ = phi_continuous;
  f.phi_prime_continuous_ = phi_prime_continuous;
  f.k_ = std::numeric_limits<double>::quiet_NaN();
  f.kinks_ = std::move(kinks);
  return f;
}

ShrinkageFamily ShrinkageFamily::identity() {
  return custom("identity", [](double) { return 0.0; }, [](double) { return 0.0; }, true, true);
}

double ShrinkageFamily::phi(double w) const {
  switch (kind_) {
    case FamilyKind::JamesStein: return k_;
    case FamilyKind::PositivePart: return std::min(w, k_);
    case FamilyKind::Custom: return phi_(w);
  }
  return 0.0;
}

double ShrinkageFamily::phi_prime(double w) const {
  switch (kind_) {
    case FamilyKind::JamesStein: return 0.0;
    case FamilyKind::PositivePart: return w < k_ ? 1.0 : 0.0;
    case FamilyKind::Custom: return phi_prime_(w);
  }
  return 0.0;
}

void ShrinkageFamily::check_dims(const ProblemDims& dims) const {
  if (kind_ == FamilyKind::Custom) return;
  if (k_ != dims.js_constant())
    throw DomainError("shrinkage family '" + name_ + "' was built for different (p, n)");
}

ShrunkEstimate apply_estimator(const Observation& obs, const ShrinkageFamily& fam, const ProblemDims& dims) {
  if (obs.size() != std::size_t(dims.p())) throw DomainError("observation length differs from p");
  fam.check_dims(dims);
  ShrunkEstimate out;
  const auto x = obs.x();
  const double w = obs.w();
  if (w == 0.0) {
    out.value.assign(x.size(), 0.0);
    out.shrunk_to_origin = fam.phi(0.0) != 0.0;
    return out;
  }
  double factor = 1.0 - fam.phi(w) / w;
  if (fam.kind() == FamilyKind::PositivePart) factor = std::max(0.0, factor);
  out.value.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.value[i] = factor * x[i];
  return out;
}

CanonicalForm canonicalize_regression(const Eigen::MatrixXd& design, const Eigen::VectorXd& response) {
  const Eigen::Index rows = design.rows();
  const Eigen::Index p = design.cols();
  if (response.size() != rows) throw DomainError("response length differs from design rows");
  if (rows <= p) throw DomainError("regression needs more observations than coefficients (N > p)");
  const ProblemDims dims(int(p), int(rows - p));

  const Eigen::MatrixXd gram = design.transpose() * design;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition of A'A failed");
  const Eigen::VectorXd ev = eig.eigenvalues();
  if (!(ev.minCoeff() > 1e-12 * ev.maxCoeff())) throw DomainError("design matrix is rank deficient");

  const Eigen::MatrixXd& v = eig.eigenvectors();
  const Eigen::MatrixXd basis = v * ev.cwiseSqrt().asDiagonal() * v.transpose();
  const Eigen::MatrixXd basis_inv = v * ev.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();

  const Eigen::VectorXd aty = design.transpose() * response;
  const Eigen::VectorXd x = basis_inv * aty;
  const Eigen::VectorXd beta_hat = eig.eigenvectors() *
                                   (ev.cwiseInverse().asDiagonal() * (eig.eigenvectors().transpose() * aty));
  const double rss = (response - design * beta_hat).squaredNorm();

  return CanonicalForm{Observation(std::vector<double>(x.data(), x.data() + x.size()), rss), dims, basis};
}

Eigen::VectorXd coefficients_from_canonical(const Eigen::MatrixXd& basis, std::span<const double> delta) {
  if (Eigen::Index(delta.size()) != basis.rows()) throw DomainError("estimate length differs from basis size");
  const Eigen::Map<const Eigen::VectorXd> d(delta.data(), Eigen::Index(delta.size()));
  return basis.llt().solve(d);
}

double risk_identity_integrand(const ShrinkageFamily& fam, const ProblemDims& dims, double w) {
  const int p = dims.p();
  const int n = dims.n();
  const double phi = fam.phi(w);
  const double dphi = fam.phi_prime(w);
  return p - (2.0 * (p - 2) * phi / w - (n + 2) * phi * phi / w + 4.0 * dphi + 4.0 * phi * dphi);
}

double sample_w(const ProblemDims& dims, double lambda, CounterRng& rng) {
  const double z = rng.normal() + std::sqrt(lambda);
  const double norm2 = z * z + rng.chi2(dims.p() - 1);
  return norm2 / rng.chi2(dims.n());
}

McEstimate true_risk(const ShrinkageFamily& fam, const ProblemDims& dims, double lambda, std::uint64_t reps,
                     const RngStream& rng, unsigned threads) {
  if (reps < 1) throw DomainError("true_risk needs reps >= 1");
  if (!(lambda >= 0.0)) throw DomainError("noncentrality must be >= 0");
  fam.check_dims(dims);
  const auto m = replicate(reps, 1, threads, [&](std::uint64_t r, std::span<double> row) {
    CounterRng draw(rng.with_stream(r));
    row[0] = risk_identity_integrand(fam, dims, sample_w(dims, lambda, draw));
  });
  const double se = m.count() > 1 ? m.stderr_of_mean(0) : 0.0;
  return {m.mean(0), se};
}

}  // namespace stein
