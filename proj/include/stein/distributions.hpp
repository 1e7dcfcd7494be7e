#pragma once

#include <functional>
#include <span>
#include <vector>

#include "stein/problem.hpp"
#include "stein/random.hpp"

namespace stein {

/// Central chi-square density f_k(x), evaluated in log space.
double chi2_pdf(double x, int k);

/// log f_k(x); -inf where the density is zero.
double chi2_log_pdf(double x, int k);

/// Noncentral chi-square density as a Poisson(lambda/2) mixture of central
/// densities, summed outward from the modal Poisson index.
double noncentral_chi2_pdf(double x, int k, double lambda);

/// Regularized incomplete beta I_x(a, b) by Lentz continued fraction.
double regularized_beta(double x, double a, double b);

/// P(F_{d1,d2} <= x).
double f_cdf(double x, int d1, int d2);

/// Quantile of the F distribution by bisection on the incomplete beta.
double f_quantile(double q, int d1, int d2);

/// p independent N(theta_i, sigma2) coordinates drawn from the start of `rng`.
std::vector<double> sample_normal_vector(const ProblemDims& dims, std::span<const double> theta,
                                         double sigma2, const RngStream& rng);

/// Same, reading from an existing cursor.
std::vector<double> sample_normal_vector(const ProblemDims& dims, std::span<const double> theta,
                                         double sigma2, CounterRng& rng);

/// sigma2 * chi^2_n drawn from the start of `rng`.
double sample_chi2(int n, double sigma2, const RngStream& rng);
double sample_chi2(int n, double sigma2, CounterRng& rng);

}  // namespace stein

namespace stein {

/// E[f(U/V)] for independent U ~ chi^2_{df_num}, V ~ chi^2_{df_den}, by
/// quadrature over T = U/(U+V) ~ Beta(df_num/2, df_den/2). Needs
/// df_num > 2 and w f(w) bounded as w -> 0. `kinks` are points in w where
/// f is not smooth. `abs_tol` is an absolute error target on the
/// expectation, for integrands that cancel to roundoff.
double expect_chi2_ratio(const std::function<double(double)>& f, double df_num, double df_den,
                         std::span<const double> kinks = {}, double abs_tol = 0.0);

}  // namespace stein
