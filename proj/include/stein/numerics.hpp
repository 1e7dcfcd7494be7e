#pragma once

#include <functional>
#include <optional>
#include <span>

namespace stein {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

struct QuadratureOptions {
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  int max_intervals = 2000;
};

/// Globally adaptive Gauss-Kronrod (7/15) on [a, b]. Interior breakpoints
/// (kinks of the integrand) are honored as initial subdivision points.
/// Throws NumericalError if the error target is not met.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {},
                           std::span<const double> breakpoints = {});

struct RootOptions {
  double x_tol = 1e-13;
  int max_iter = 400;
};

/// Bisection for f(x) = 0 on a bracket with a sign change. Throws
/// NumericalError when f(lo) and f(hi) share a sign.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              const RootOptions& opts = {});

/// Bisection on [lo, hi], doubling hi up to `max_expansions` times until
/// the sign changes. Returns nullopt if no sign change is ever found.
std::optional<double> bisect_expanding(const std::function<double(double)>& f, double lo,
                                       double hi, int max_expansions = 60,
                                       const RootOptions& opts = {});

}  // namespace stein
