#include "stein/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "stein/errors.hpp"

namespace stein {

namespace {

// Kronrod 15-point abscissae; odd indices are the embedded 7-point Gauss nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error, abs_value;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double kronrod_abs = std::abs(fc) * kWgk[7];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kWgk[i] * (f1 + f2);
    kronrod_abs += kWgk[i] * (std::abs(f1) + std::abs(f2));
    if (i % 2 == 1) gauss += kWg[i / 2] * (f1 + f2);
  }
  kronrod *= half;
  gauss *= half;
  kronrod_abs *= half;
  if (!std::isfinite(kronrod))
    throw NumericalError("integrand is not finite on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  return {a, b, kronrod, std::abs(kronrod - gauss), kronrod_abs};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts, std::span<const double> breakpoints) {
  if (a == b) return {};
  if (a > b) {
    auto r = integrate(f, b, a, opts, breakpoints);
    r.value = -r.value;
    return r;
  }
  std::vector<double> cuts{a};
  for (double c : breakpoints)
    if (c > a && c < b) cuts.push_back(c);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  std::priority_queue<Segment> heap;
  double total = 0.0;
  double error = 0.0;
  double total_abs = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    Segment s = gk15(f, cuts[i], cuts[i + 1]);
    total += s.value;
    error += s.error;
    total_abs += s.abs_value;
    heap.push(s);
  }
  int intervals = int(heap.size());
  // Integrals that cancel to (nearly) zero cannot meet a relative target;
  // accept an error at the roundoff level of int |f|.
  auto target = [&] {
    return std::max({opts.abs_tol, opts.rel_tol * std::abs(total),
                     50.0 * std::numeric_limits<double>::epsilon() * total_abs});
  };
  while (error > target()) {
    if (intervals >= opts.max_intervals) {
      throw NumericalError("adaptive quadrature did not converge: estimate " + std::to_string(total) +
                           ", error " + std::to_string(error) + " after " +
                           std::to_string(intervals) + " intervals");
    }
    const Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval at machine resolution
    heap.pop();
    const Segment left = gk15(f, worst.a, mid);
    const Segment right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // Re-sum to shed the drift of incremental updates.
  double sum = 0.0, err = 0.0;
  for (; !heap.empty(); heap.pop()) {
    sum += heap.top().value;
    err += heap.top().error;
  }
  return {sum, err, intervals};
}

double bisect(const std::function<double(double)>& f, double lo, double hi, const RootOptions& opts) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi))
    throw NumericalError("no sign change on bracket [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  for (int it = 0; it < opts.max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= opts.x_tol * std::max(1.0, std::abs(mid)) || mid <= lo || mid >= hi) return mid;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::optional<double> bisect_expanding(const std::function<double(double)>& f, double lo, double hi,
                                       int max_expansions, const RootOptions& opts) {
  const double flo = f(lo);
  if (flo == 0.0) return lo;
  for (int e = 0; e <= max_expansions; ++e) {
    const double fhi = f(hi);
    if (fhi == 0.0 || std::signbit(fhi) != std::signbit(flo)) return bisect(f, lo, hi, opts);
    hi *= 2.0;
  }
  return std::nullopt;
}

}  // namespace stein
