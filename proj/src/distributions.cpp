#include "stein/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "stein/errors.hpp"
#include "stein/numerics.hpp"

namespace stein {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative mass the noncentral series is allowed to drop.
constexpr double kSeriesTailTol = 1e-16;

void check_dof(int k) {
  if (k < 1) throw DomainError("chi-square degrees of freedom must be >= 1, got " + std::to_string(k));
}

double log_poisson(int j, double mean) {
  return -mean + j * std::log(mean) - std::lgamma(j + 1.0);
}

}  // namespace

double chi2_log_pdf(double x, int k) {
  check_dof(k);
  if (!(x >= 0.0)) throw DomainError("chi-square density needs x >= 0");
  const double half_k = 0.5 * k;
  if (x == 0.0) {
    if (k == 1) return kInf;
    if (k == 2) return std::log(0.5);
    return -kInf;
  }
  return (half_k - 1.0) * std::log(x) - 0.5 * x - half_k * std::numbers::ln2 - std::lgamma(half_k);
}

double chi2_pdf(double x, int k) { return std::exp(chi2_log_pdf(x, k)); }

double noncentral_chi2_pdf(double x, int k, double lambda) {
  check_dof(k);
  if (!(x >= 0.0)) throw DomainError("noncentral chi-square density needs x >= 0");
  if (!(lambda >= 0.0)) throw DomainError("noncentrality must be >= 0");
  if (lambda == 0.0) return chi2_pdf(x, k);
  if (x == 0.0) return std::exp(-0.5 * lambda) * chi2_pdf(0.0, k);

  const double mean = 0.5 * lambda;
  const int mode = int(std::floor(mean));
  auto term = [&](int j) { return std::exp(log_poisson(j, mean) + chi2_log_pdf(x, k + 2 * j)); };

  double sum = 0.0;
  // Upward from the mode. f_m(x) <= 1/2 for m >= 2 bounds every remaining term.
  for (int j = mode;; ++j) {
    sum += term(j);
    const double r = mean / (j + 1.0);
    if (r < 1.0) {
      const double tail = 0.5 * std::exp(log_poisson(j, mean)) * r / (1.0 - r);
      if (tail <= kSeriesTailTol * sum) break;
    }
    if (j - mode > 100000) throw NumericalError("noncentral chi-square series did not converge");
  }
  // Downward. The j = 0 density may exceed 1/2 only for k = 1.
  const double bound = std::max(0.5, chi2_pdf(x, k));
  for (int j = mode - 1; j >= 0; --j) {
    sum += term(j);
    const double q = j / mean;
    const double tail = bound * std::exp(log_poisson(j, mean)) * q / (1.0 - q);
    if (tail <= kSeriesTailTol * sum) break;
  }
  return sum;
}

double regularized_beta(double x, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw DomainError("incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete beta needs 0 <= x <= 1");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  if (x > (a + 1.0) / (a + b + 2.0)) return 1.0 - regularized_beta(1.0 - x, b, a);

  const double log_front = a * std::log(x) + b * std::log1p(-x) - (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) return std::exp(log_front) * h / a;
  }
  throw NumericalError("incomplete beta continued fraction did not converge");
}

double f_cdf(double x, int d1, int d2) {
  if (d1 < 1 || d2 < 1) throw DomainError("F distribution needs positive degrees of freedom");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double y = d1 * x / (d1 * x + d2);
  return regularized_beta(y, 0.5 * d1, 0.5 * d2);
}

double f_quantile(double q, int d1, int d2) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("F quantile needs 0 < q < 1");
  if (d1 < 1 || d2 < 1) throw DomainError("F distribution needs positive degrees of freedom");
  const double a = 0.5 * d1;
  const double b = 0.5 * d2;
  double lo = 0.0;
  double hi = 1.0;
  // The beta variable y = d1 F / (d1 F + d2) is bisected until the bracket collapses.
  for (int it = 0; it < 1100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (regularized_beta(mid, a, b) < q) lo = mid;
    else hi = mid;
  }
  const double y = 0.5 * (lo + hi);
  return d2 * y / (d1 * (1.0 - y));
}

std::vector<double> sample_normal_vector(const ProblemDims& dims, std::span<const double> theta,
                                         double sigma2, CounterRng& rng) {
  if (theta.size() != std::size_t(dims.p()))
    throw DomainError("theta has length " + std::to_string(theta.size()) + ", expected p = " +
                      std::to_string(dims.p()));
  if (!(sigma2 > 0.0)) throw DomainError("sigma2 must be positive");
  const double sd = std::sqrt(sigma2);
  std::vector<double> x(theta.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = theta[i] + sd * rng.normal();
  return x;
}

std::vector<double> sample_normal_vector(const ProblemDims& dims, std::span<const double> theta,
                                         double sigma2, const RngStream& stream) {
  CounterRng rng(stream);
  return sample_normal_vector(dims, theta, sigma2, rng);
}

double sample_chi2(int n, double sigma2, CounterRng& rng) {
  check_dof(n);
  if (!(sigma2 > 0.0)) throw DomainError("sigma2 must be positive");
  return sigma2 * rng.chi2(n);
}

double sample_chi2(int n, double sigma2, const RngStream& stream) {
  CounterRng rng(stream);
  return sample_chi2(n, sigma2, rng);
}

}  // namespace stein

namespace stein {

double expect_chi2_ratio(const std::function<double(double)>& f, double df_num, double df_den,
                         std::span<const double> kinks, double abs_tol) {
  if (!(df_num > 2.0) || !(df_den > 0.0)) throw DomainError("expect_chi2_ratio needs df_num > 2, df_den > 0");
  const double a = 0.5 * df_num;
  const double b = 0.5 * df_den;
  const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  const double norm = std::exp(-log_beta);

  QuadratureOptions opts;
  // Each half gets half of the absolute budget, in unnormalized units.
  opts.abs_tol = std::max(1e-300, 0.5 * abs_tol / norm);
  opts.rel_tol = 1e-12;
  opts.max_intervals = 5000;

  // t in (0, 1/2]: t = x^{1/(a-1)} absorbs t^{a-2}.
  auto lower = [&](double x) {
    const double t = std::pow(x, 1.0 / (a - 1.0));
    const double w = t / (1.0 - t);
    if (w == 0.0) return 0.0;
    return f(w) * w * std::pow(1.0 - t, b) / (a - 1.0);
  };
  // t in [1/2, 1): 1 - t = y^{1/b} absorbs (1-t)^{b-1}.
  auto upper = [&](double y) {
    const double r = std::pow(y, 1.0 / b);
    const double t = 1.0 - r;
    const double w = t / r;
    if (!std::isfinite(w)) return 0.0;
    return f(w) * std::pow(t, a - 1.0) / b;
  };

  std::vector<double> lower_splits, upper_splits;
  for (double k : kinks) {
    if (!(k > 0.0) || !std::isfinite(k)) continue;
    const double t = k / (1.0 + k);
    if (t < 0.5)
      lower_splits.push_back(std::pow(t, a - 1.0));
    else if (t > 0.5)
      upper_splits.push_back(std::pow(1.0 - t, b));
  }
  const double lo = integrate(lower, 0.0, std::pow(0.5, a - 1.0), opts, lower_splits).value;
  const double hi = integrate(upper, 0.0, std::pow(0.5, b), opts, upper_splits).value;
  return norm * (lo + hi);
}

}  // namespace stein
