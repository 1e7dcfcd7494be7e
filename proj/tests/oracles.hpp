#pragma once

// Reference implementations used only by the tests.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

namespace oracle {

inline double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// w^{n/2} int_w^inf t^{-n/2-1} h(t) dt on the original unbounded domain,
/// split at `kink` when it lies above w.
template <class H>
double g_tail(H h, int n, double w, double kink = -1.0) {
  boost::math::quadrature::exp_sinh<double> tail;
  boost::math::quadrature::tanh_sinh<double> finite;
  auto f = [&](double t) { return std::pow(t, -0.5 * n - 1.0) * h(t); };
  double total = 0.0;
  double start = w;
  if (kink > w) {
    total += finite.integrate(f, w, kink);
    start = kink;
  }
  total += tail.integrate(f, start, std::numeric_limits<double>::infinity());
  return std::pow(w, 0.5 * n) * total;
}

}  // namespace oracle
