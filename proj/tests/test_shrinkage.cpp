#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "stein/errors.hpp"
#include "stein/random.hpp"
#include "stein/shrinkage.hpp"

using namespace stein;

TEST_CASE("dimension and observation validation") {
  CHECK_THROWS_AS(ProblemDims(2, 5), DomainError);
  CHECK_THROWS_AS(ProblemDims(5, 0), DomainError);
  CHECK_THROWS_AS(Observation({1.0, 2.0}, 0.0), DomainError);
  CHECK_THROWS_AS(Observation({}, 1.0), DomainError);
  const Observation o({3.0, 4.0, 0.0}, 5.0);
  CHECK(o.w() == 5.0);
}

TEST_CASE("James-Stein example: factor 4/7") {
  const ProblemDims dims(5, 5);
  const Observation obs({2, 0, 0, 0, 0}, 4.0);
  const auto r = apply_estimator(obs, ShrinkageFamily::james_stein(dims), dims);
  CHECK(r.value[0] == doctest::Approx(8.0 / 7.0).epsilon(1e-15));
  for (int i = 1; i < 5; ++i) CHECK(r.value[i] == 0.0);
  CHECK_FALSE(r.shrunk_to_origin);
}

TEST_CASE("identity rule returns x; positive part zeroes small W") {
  const ProblemDims dims(5, 5);
  const Observation obs({0.3, -0.2, 0.1, 0.0, 0.4}, 4.0);
  const auto same = apply_estimator(obs, ShrinkageFamily::identity(), dims);
  for (std::size_t i = 0; i < 5; ++i) CHECK(same.value[i] == obs.x()[i]);
  REQUIRE(obs.w() <= dims.js_constant());
  for (double v : apply_estimator(obs, ShrinkageFamily::positive_part(dims), dims).value) CHECK(v == 0.0);
}

TEST_CASE("W = 0 returns the origin and flags it") {
  const ProblemDims dims(3, 4);
  const auto r = apply_estimator(Observation({0, 0, 0}, 1.0), ShrinkageFamily::james_stein(dims), dims);
  CHECK(r.shrunk_to_origin);
  for (double v : r.value) CHECK(v == 0.0);
}

TEST_CASE("estimates are collinear with x and never flip sign for the positive part") {
  const ProblemDims dims(6, 3);
  CounterRng rng(RngStream{5, 0});
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> x(6);
    for (double& v : x) v = rng.normal() * 0.5;
    const Observation obs(x, rng.chi2(3));
    for (const auto& fam : {ShrinkageFamily::james_stein(dims), ShrinkageFamily::positive_part(dims)}) {
      const auto d = apply_estimator(obs, fam, dims).value;
      const double ratio = d[0] / x[0];
      for (int i = 1; i < 6; ++i) CHECK(d[i] == doctest::Approx(ratio * x[i]).epsilon(1e-12).scale(1e-12));
      if (fam.kind() == FamilyKind::PositivePart) CHECK(ratio >= 0.0);
    }
  }
}

TEST_CASE("family built for other dimensions is rejected") {
  const ProblemDims a(5, 5), b(6, 5);
  CHECK_THROWS_AS(apply_estimator(Observation({1, 1, 1, 1, 1, 1}, 1.0), ShrinkageFamily::james_stein(a), b),
                  DomainError);
}

TEST_CASE("canonical form: orthonormal design") {
  Eigen::MatrixXd q = Eigen::MatrixXd::Random(12, 4);
  q = Eigen::HouseholderQR<Eigen::MatrixXd>(q).householderQ() * Eigen::MatrixXd::Identity(12, 4);
  const Eigen::VectorXd y = Eigen::VectorXd::Random(12);
  const auto c = canonicalize_regression(q, y);
  CHECK(c.dims.p() == 4);
  CHECK(c.dims.n() == 8);
  CHECK((c.basis - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-12);
  const Eigen::VectorXd aty = q.transpose() * y;
  for (int i = 0; i < 4; ++i) CHECK(c.obs.x()[i] == doctest::Approx(aty[i]).epsilon(1e-12));
  CHECK(c.obs.norm2() + c.obs.s() == doctest::Approx(y.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("canonical form: residual sum of squares matches a least-squares oracle") {
  std::srand(3);
  const Eigen::MatrixXd a = Eigen::MatrixXd::Random(20, 5);
  const Eigen::VectorXd y = Eigen::VectorXd::Random(20);
  const auto c = canonicalize_regression(a, y);
  // Oracle: normal equations solved by LDLT.
  const Eigen::VectorXd beta = (a.transpose() * a).ldlt().solve(a.transpose() * y);
  const double rss = (y - a * beta).squaredNorm();
  CHECK(std::abs(c.obs.s() - rss) / rss < 1e-10);
  // beta = B^{-1} X.
  const Eigen::VectorXd back = coefficients_from_canonical(c.basis, c.obs.x());
  CHECK((back - beta).norm() < 1e-10 * beta.norm());
  CHECK((c.basis * c.basis - a.transpose() * a).norm() < 1e-10 * (a.transpose() * a).norm());
}

TEST_CASE("rank-deficient or short designs are rejected") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Random(10, 4);
  a.col(3) = a.col(0) + a.col(1);
  CHECK_THROWS_AS(canonicalize_regression(a, Eigen::VectorXd::Random(10)), DomainError);
  CHECK_THROWS_AS(canonicalize_regression(Eigen::MatrixXd::Random(4, 4), Eigen::VectorXd::Random(4)), DomainError);
}

TEST_CASE("true risk of the identity rule is exactly p") {
  const ProblemDims dims(5, 5);
  const auto r = true_risk(ShrinkageFamily::identity(), dims, 3.0, 1000, RngStream{1, 0});
  CHECK(r.value == 5.0);
  CHECK(r.std_error == 0.0);
}

TEST_CASE("true risk of James-Stein at lambda = 0 is p - n(p-2)/(n+2)") {
  const ProblemDims dims(5, 5);
  const auto r = true_risk(ShrinkageFamily::james_stein(dims), dims, 0.0, 400000, RngStream{2, 0});
  CHECK(std::abs(r.value - 20.0 / 7.0) < 3 * r.std_error);
}

TEST_CASE("true risk tends to p as lambda grows") {
  const ProblemDims dims(5, 5);
  const auto r = true_risk(ShrinkageFamily::james_stein(dims), dims, 1e6, 100000, RngStream{3, 0});
  CHECK(std::abs(r.value - 5.0) < 3 * r.std_error + 1e-4);
}

TEST_CASE("James-Stein and its positive part dominate X on a lambda grid") {
  const ProblemDims dims(5, 5);
  for (const auto& fam : {ShrinkageFamily::james_stein(dims), ShrinkageFamily::positive_part(dims)})
    for (double lambda : {0.0, 1.0, 3.0, 10.0, 30.0}) {
      const auto r = true_risk(fam, dims, lambda, 50000, RngStream{4, 0});
      CHECK(r.value <= 5.0 + 3 * r.std_error);
    }
}

TEST_CASE("risk identity agrees with direct squared error averaging") {
  const ProblemDims dims(5, 5);
  const auto fam = ShrinkageFamily::positive_part(dims);
  const double lambda = 4.0;
  const auto id = true_risk(fam, dims, lambda, 200000, RngStream{6, 0});
  const std::vector<double> theta(5, std::sqrt(lambda / 5));
  double sum = 0, sum2 = 0;
  const int reps = 200000;
  for (int r = 0; r < reps; ++r) {
    CounterRng rng(RngStream{7, std::uint64_t(r)});
    std::vector<double> x(theta);
    for (double& v : x) v += rng.normal();
    const auto d = apply_estimator(Observation(x, rng.chi2(5)), fam, dims).value;
    double l = 0;
    for (int i = 0; i < 5; ++i) l += (d[i] - theta[i]) * (d[i] - theta[i]);
    sum += l;
    sum2 += l * l;
  }
  const double mean = sum / reps;
  const double se = std::sqrt((sum2 / reps - mean * mean) / reps);
  CHECK(std::abs(mean - id.value) < 4 * std::hypot(se, id.std_error));
}
