#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "stein/confidence.hpp"
#include "stein/distributions.hpp"
#include "stein/errors.hpp"
#include "stein/umvue.hpp"

using namespace stein;
using oracle::rel_err;

namespace {

Eigen::MatrixXd dense(const AxialMatrix& m) {
  const auto v = m.to_dense();
  const auto p = Eigen::Index(m.dim());
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(v.data(), p, p);
}

MatrixConstants constants_for(const ShrinkageFamily& fam, const ProblemDims& d) {
  return matrix_constants(fam, d, beta_constants_quadrature(fam, d, 50));
}

std::vector<double> rotate(const Eigen::MatrixXd& q, std::span<const double> v) {
  const Eigen::Map<const Eigen::VectorXd> x(v.data(), Eigen::Index(v.size()));
  const Eigen::VectorXd y = q * x;
  return {y.data(), y.data() + y.size()};
}

}  // namespace

TEST_CASE("AxialMatrix algebra") {
  const AxialMatrix m(2.0, 0.5, 1.5, {0.0, 3.0, 4.0});
  CHECK(m.axis()[1] == doctest::Approx(0.6));
  CHECK(m.eigenvalue_across() == doctest::Approx(1.0));
  CHECK(m.eigenvalue_along() == doctest::Approx(4.0));
  CHECK(m.trace() == doctest::Approx(2.0 * (3 * 0.5 + 1.5)));
  CHECK(m.determinant() == doctest::Approx(4.0));
  const Eigen::MatrixXd a = dense(m);
  CHECK(a.trace() == doctest::Approx(m.trace()));
  CHECK(a.determinant() == doctest::Approx(m.determinant()));
  CHECK_THROWS_AS(AxialMatrix(1.0, 1.0, 0.0, {0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(AxialMatrix(1.0, 1.0, -2.0, {1.0, 0.0}).log_determinant(), NotPositiveDefinite);
}

TEST_CASE("quad_form_inv: special cases") {
  const AxialMatrix iso(2.0, 0.5, 0.0, {1, 0, 0});
  const std::vector<double> d{1.0, 2.0, 2.0};
  CHECK(quad_form_inv(iso, d) == doctest::Approx(9.0 / 1.0));
  const AxialMatrix ax(2.0, 0.5, 3.0, {1, 0, 0});
  const std::vector<double> perp{0.0, 2.0, 2.0};
  CHECK(quad_form_inv(ax, perp) == doctest::Approx(8.0 / 1.0));
  try {
    quad_form_inv(AxialMatrix(1.0, 0.5, -0.7, {1, 0, 0}), d);
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& e) {
    CHECK(e.eigenvalue() == doctest::Approx(-0.2));
  }
}

TEST_CASE("quad_form_inv agrees with a dense Cholesky solve") {
  CounterRng rng(RngStream{4, 0});
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> u(5), d(5);
    for (double& v : u) v = rng.normal();
    for (double& v : d) v = rng.normal();
    const double iso = 0.05 + rng.uniform();
    const double axial = -0.9 * iso + 3 * rng.uniform();
    const AxialMatrix m(0.1 + 5 * rng.uniform(), iso, axial, u);
    const Eigen::Map<const Eigen::VectorXd> dv(d.data(), 5);
    const double ref = dv.dot(dense(m).llt().solve(dv));
    CHECK(rel_err(quad_form_inv(m, d), ref) < 1e-10);
    CHECK(quad_form_inv(m, d) > 0.0);
  }
}

TEST_CASE("ellipsoid volume") {
  // p = 2 disc with unit matrix: radius^2 = c p = 2.
  CHECK(ellipsoid_volume(AxialMatrix(1.0, 1.0, 0.0, {1, 0}), 1.0) == doctest::Approx(2 * std::numbers::pi));
  const AxialMatrix m(1.3, 0.4, 0.9, {1, 2, 3, 4, 5});
  const AxialMatrix scaled(1.3 * 2.5, 0.4, 0.9, {1, 2, 3, 4, 5});
  CHECK(ellipsoid_volume(scaled, 2.0) / ellipsoid_volume(m, 2.0) == doctest::Approx(std::pow(2.5, 2.5)));
}

TEST_CASE("sets contain their own center; boundary counts as inside") {
  const ProblemDims d(5, 5);
  const auto jp = ShrinkageFamily::positive_part(d);
  const auto c = constants_for(jp, d);
  const Observation o({1.0, -0.5, 0.3, 2.0, 0.1}, 3.0);
  for (auto v : kAllConfidenceVariants) {
    const auto center = build_confidence_set({v}, o, jp, d, &c);
    const auto r = build_confidence_set({v}, o, jp, d, &c, std::span<const double>(center.center));
    CHECK(*r.contains_truth);
    CHECK(r.volume > 0.0);
  }
  // C0 boundary: ||X - theta||^2 = c p S / n.
  const double crit = f_quantile(0.95, 5, 5);
  std::vector<double> theta(o.x().begin(), o.x().end());
  theta[0] -= std::sqrt(crit * 5 * 3.0 / 5);
  ConfidenceSpec spec{ConfidenceVariant::C0, 0.95, crit};
  const auto r = build_confidence_set(spec, o, jp, d, nullptr, std::span<const double>(theta));
  CHECK(std::abs(*r.quadratic_form - r.quadratic_radius) < 1e-12 * r.quadratic_radius);
  // Nudge exactly onto the threshold to exercise the closed convention.
  ConfidenceResult exact = r;
  exact.quadratic_radius = *r.quadratic_form;
  CHECK(exact.contains(theta));
}

TEST_CASE("starred sets have the C0 volume; volume ratios") {
  const ProblemDims d(5, 5);
  const auto jp = ShrinkageFamily::positive_part(d);
  const auto c = constants_for(jp, d);
  CounterRng rng(RngStream{8, 0});
  for (int i = 0; i < 500; ++i) {
    std::vector<double> x(5);
    for (double& v : x) v = rng.normal();
    const Observation o(x, rng.chi2(5));
    const double v0 = build_confidence_set({ConfidenceVariant::C0}, o, jp, d, &c).volume;
    CHECK(rel_err(build_confidence_set({ConfidenceVariant::C3}, o, jp, d, &c).volume, v0) < 1e-12);
    CHECK(rel_err(build_confidence_set({ConfidenceVariant::C1Star}, o, jp, d, &c).volume, v0) < 1e-12);
    CHECK(rel_err(build_confidence_set({ConfidenceVariant::C2Star}, o, jp, d, &c).volume, v0) < 1e-12);
  }
}

TEST_CASE("rotation invariance of Q statistics and volumes") {
  const ProblemDims d(5, 5);
  const auto jp = ShrinkageFamily::positive_part(d);
  const auto c = constants_for(jp, d);
  std::srand(5);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(Eigen::MatrixXd::Random(5, 5)).householderQ();
  const std::vector<double> x{0.4, -1.0, 0.7, 0.2, 1.5}, theta{0.1, 0.2, 0.3, -0.4, 0.9};
  const Observation a(x, 2.0), b(rotate(q, x), 2.0);
  const auto rt = rotate(q, theta);
  for (auto v : kAllConfidenceVariants) {
    const auto ra = build_confidence_set({v}, a, jp, d, &c, std::span<const double>(theta));
    const auto rb = build_confidence_set({v}, b, jp, d, &c, std::span<const double>(rt));
    CHECK(rel_err(*ra.quadratic_form, *rb.quadratic_form) < 1e-10);
    CHECK(rel_err(ra.volume, rb.volume) < 1e-10);
  }
}

TEST_CASE("C1 membership is invariant to rescaling (x, S, theta) -> (t x, t^2 S, t theta)") {
  const ProblemDims d(5, 5);
  const auto jp = ShrinkageFamily::positive_part(d);
  const auto c = constants_for(jp, d);
  CounterRng rng(RngStream{12, 0});
  for (int i = 0; i < 300; ++i) {
    std::vector<double> x(5), theta(5);
    for (double& v : x) v = rng.normal();
    for (double& v : theta) v = rng.normal();
    const double s = rng.chi2(5), t = 0.1 + 10 * rng.uniform();
    std::vector<double> tx(x), tt(theta);
    for (double& v : tx) v *= t;
    for (double& v : tt) v *= t;
    const auto r1 = build_confidence_set({ConfidenceVariant::C1}, Observation(x, s), jp, d, &c,
                                         std::span<const double>(theta));
    const auto r2 = build_confidence_set({ConfidenceVariant::C1}, Observation(tx, t * t * s), jp, d, &c,
                                         std::span<const double>(tt));
    CHECK(rel_err(*r1.quadratic_form, *r2.quadratic_form) < 1e-10);
    if (std::abs(*r1.quadratic_form - r1.quadratic_radius) > 1e-8) CHECK(*r1.contains_truth == *r2.contains_truth);
  }
}

TEST_CASE("C3 covers at least 95% at lambda = 0") {
  const ProblemDims d(5, 5);
  const auto jp = ShrinkageFamily::positive_part(d);
  const std::vector<double> theta(5, 0.0);
  ConfidenceSpec spec{ConfidenceVariant::C3, 0.95, f_quantile(0.95, 5, 5)};
  const int reps = 100000;
  int hits = 0;
  for (int r = 0; r < reps; ++r) {
    CounterRng rng(RngStream{77, std::uint64_t(r)});
    std::vector<double> x(5);
    for (double& v : x) v = rng.normal();
    hits += *build_confidence_set(spec, Observation(x, rng.chi2(5)), jp, d, nullptr, std::span<const double>(theta))
                 .contains_truth;
  }
  CHECK(double(hits) / reps >= 0.95);
}

TEST_CASE("variant names round-trip") {
  for (auto v : kAllConfidenceVariants) CHECK(parse_confidence_variant(to_string(v)) == v);
}
