#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "stein/errors.hpp"
#include "stein/matrix_improved.hpp"
#include "stein/umvue.hpp"

using namespace stein;
using oracle::rel_err;

namespace {

const ProblemDims kTable[] = {ProblemDims(5, 5), ProblemDims(10, 5), ProblemDims(5, 10), ProblemDims(10, 10)};

// James-Stein has phi/W and b proportional to 1/W, and E[1/W] = n/(m-2).
double js_beta(int order, const ProblemDims& d, int j) {
  const double p = d.p(), n = d.n(), k = d.js_constant(), m = p + 2.0 * j;
  const double b = 4 * k + (n + 2) * k * k;
  const double c = order == 1 ? 2 * (p - 1) * k - (m - 1) * b / m : 2 * k - b / m;
  return c * n / (m - 2);
}

Observation random_obs(const ProblemDims& d, CounterRng& rng) {
  const double lambda = 40 * rng.uniform();
  std::vector<double> x(std::size_t(d.p()));
  for (double& v : x) v = std::sqrt(lambda / d.p()) + rng.normal();
  const double s = rng.chi2(d.n()) * std::pow(10.0, 4 * rng.uniform() - 2);
  return Observation(x, s);
}

}  // namespace

TEST_CASE("b(W)") {
  const ProblemDims d(5, 5);
  CHECK(b_of_w(ShrinkageFamily::identity(), d, 1.0) == 0.0);
  CHECK(b_of_w(ShrinkageFamily::james_stein(d), d, 1.0) == doctest::Approx(3.0));
  const auto jp = ShrinkageFamily::positive_part(d);
  for (double w : {0.05, 0.2, 0.4}) CHECK(b_of_w(jp, d, w) == doctest::Approx(3.0 * w));
}

TEST_CASE("beta_j for phi = 0 vanishes exactly") {
  const ProblemDims d(5, 5);
  const auto b = beta_j(2, ShrinkageFamily::identity(), d, 3, 1000, RngStream{1, 0});
  CHECK(b.value == 0.0);
  CHECK(b.std_error == 0.0);
}

TEST_CASE("beta_j for James-Stein: quadrature and Monte Carlo against the closed form") {
  for (const auto& d : kTable) {
    const auto js = ShrinkageFamily::james_stein(d);
    for (int j : {0, 1, 4, 30}) {
      for (int order : {1, 2}) {
        CHECK(rel_err(beta_j_quadrature(order, js, d, j).value, js_beta(order, d, j)) < 1e-9);
      }
      const auto mc = beta_j(2, js, d, j, 200000, RngStream{3, 0});
      CHECK(std::abs(mc.value - js_beta(2, d, j)) < 4 * mc.std_error);
    }
  }
}

TEST_CASE("beta_j for the positive part: Monte Carlo agrees with quadrature") {
  const ProblemDims d(5, 5);
  const auto jp = ShrinkageFamily::positive_part(d);
  for (int j : {0, 2, 10})
    for (int order : {1, 2}) {
      const auto mc = beta_j(order, jp, d, j, 200000, RngStream{4, 0});
      CHECK(std::abs(mc.value - beta_j_quadrature(order, jp, d, j).value) < 4 * mc.std_error);
    }
}

TEST_CASE("beta^(2) tail: j = 200 approaches the b-free limit") {
  const ProblemDims d(5, 5);
  const auto js = ShrinkageFamily::james_stein(d);
  const auto far = beta_j(2, js, d, 200, 200000, RngStream{5, 0});
  const double limit = 2 * d.js_constant() * d.n() / (d.p() + 400.0 - 2);
  CHECK(std::abs(far.value - limit) < 3 * far.std_error + 0.01 * limit);
}

TEST_CASE("beta constants: extrema, attainment and sign") {
  const ProblemDims d(5, 5);
  const auto q = beta_constants_quadrature(ShrinkageFamily::positive_part(d), d, 50);
  CHECK(q.beta2_j == 0);
  CHECK(std::abs(q.beta2 - 0.5332) < 0.02);
  CHECK(q.per_j2.size() == 53);
  CHECK(q.per_j2.back().j == 200);
  CHECK_THROWS_AS(beta_constants_quadrature(ShrinkageFamily::positive_part(d), d, 5), DomainError);
  for (const auto& dims : {ProblemDims(5, 5), ProblemDims(10, 10)})
    for (const auto& fam : {ShrinkageFamily::james_stein(dims), ShrinkageFamily::positive_part(dims)}) {
      const auto b = beta_constants_quadrature(fam, dims, 50);
      CHECK(b.beta1 >= 0.0);
      for (const auto& e : b.per_j1) CHECK(e.value >= b.beta1);
      for (const auto& e : b.per_j2) CHECK(e.value <= b.beta2);
    }
  const auto js = beta_constants_quadrature(ShrinkageFamily::james_stein(ProblemDims(10, 10)), ProblemDims(10, 10), 50);
  CHECK(std::abs(js.beta2 - 0.6718) < 0.02);
  CHECK(js.beta2_j <= 1);
}

TEST_CASE("Monte Carlo beta constants reuse draws across orders and are reproducible") {
  const ProblemDims d(5, 5);
  const auto jp = ShrinkageFamily::positive_part(d);
  const auto a = beta_constants(jp, d, 10, 20000, RngStream{9, 0}, 1);
  const auto b = beta_constants(jp, d, 10, 20000, RngStream{9, 0}, 3);
  CHECK(a.beta2 == b.beta2);
  CHECK(a.beta1 == b.beta1);
  CHECK(beta_j(2, jp, d, 4, 20000, RngStream{9, 0}).value == a.per_j2[4].value);
}

TEST_CASE("W_xi and W_eta for James-Stein") {
  for (const auto& d : kTable) {
    const auto js = ShrinkageFamily::james_stein(d);
    const double beta2 = js_beta(2, d, 0);
    const auto r = solve_w_xi_eta(js, d, beta2);
    REQUIRE(r.w_xi);
    // (1+W) W = 2k(n+p+2) / ((n+2) beta2).
    const double rhs = 2 * d.js_constant() * (d.n() + d.p() + 2.0) / ((d.n() + 2.0) * beta2);
    CHECK(rel_err(*r.w_xi * (1 + *r.w_xi), rhs) < 1e-10);
    CHECK_FALSE(r.w_eta);
  }
  const ProblemDims d(5, 5);
  const auto r = solve_w_xi_eta(ShrinkageFamily::james_stein(d), d, 0.4260);
  CHECK(std::abs(*r.w_xi - 1.4198) < 0.02);
  const auto g = gamma_xi_eta(d, r, 0.4260);
  CHECK(std::abs(*g.gamma_xi - 0.4312) < 0.03);
  CHECK_FALSE(g.gamma_eta);
}

TEST_CASE("W_eta and gamma for the positive part") {
  const ProblemDims d(5, 5);
  const auto jp = ShrinkageFamily::positive_part(d);
  const auto c = matrix_constants(jp, d, beta_constants_quadrature(jp, d, 50));
  REQUIRE(c.roots.w_eta);
  CHECK(std::abs(*c.roots.w_eta - 0.2185) < 0.02);
  CHECK(std::abs(*c.gammas.gamma_eta - 0.2708) < 0.03);
  CHECK(c.xi1_eta1_certified);
  CHECK(c.xi2_eta2_certified);
  const ProblemDims d2(10, 10);
  const auto jp2 = ShrinkageFamily::positive_part(d2);
  const auto c2 = matrix_constants(jp2, d2, beta_constants_quadrature(jp2, d2, 50));
  CHECK(std::abs(*c2.gammas.gamma_xi - 0.8170) < 0.03);
}

TEST_CASE("Umvue kind reproduces the matrix UMVUE; missing constants throw") {
  const ProblemDims d(5, 5);
  const auto jp = ShrinkageFamily::positive_part(d);
  const Observation o({0.3, 1.0, -0.2, 0.5, 0.1}, 2.0);
  const auto a = estimate_mse_matrix(MatrixEstimatorKind::Umvue, o, jp, d);
  const auto b = umvue_mse_matrix(o, jp, d);
  CHECK(a.iso() == b.iso());
  CHECK(a.axial() == b.axial());
  CHECK_THROWS_AS(estimate_mse_matrix(MatrixEstimatorKind::Xi1Eta1, o, jp, d), MissingConstants);
}

TEST_CASE("Xi2Eta2 eigenvalue floor for James-Stein at (5,5)") {
  const ProblemDims d(5, 5);
  const auto js = ShrinkageFamily::james_stein(d);
  BetaConstants beta;
  beta.beta2 = 0.4260;
  beta.per_j1 = {{0, 0.0, 0.0}};
  beta.per_j2 = {{0, 0.4260, 0.0}};
  const auto c = matrix_constants(js, d, beta);
  // Small W: g1 large, so xi2 = beta2/((n+2) g1) and the across-axis eigenvalue is the floor.
  const Observation o({0.1, 0, 0, 0, 0}, 1.0);
  const auto m = estimate_mse_matrix(MatrixEstimatorKind::Xi2Eta2, o, js, d, &c);
  CHECK(m.eigenvalue_across() == doctest::Approx(0.2 - 0.4260 / 7));
  CHECK(m.eigenvalue_across() == doctest::Approx(0.1391).epsilon(1e-3));
}

TEST_CASE("every emitted xi and eta respects its defining bounds") {
  for (const auto& d : kTable)
    for (const auto& fam : {ShrinkageFamily::james_stein(d), ShrinkageFamily::positive_part(d)}) {
      const auto c = matrix_constants(fam, d, beta_constants_quadrature(fam, d, 20));
      for (int i = 0; i < 120; ++i) {
        const double w = std::pow(10.0, -4.0 + 8.0 * i / 119.0);
        const auto g = g_values(fam, d, w);
        const double n = d.n(), p = d.p();
        const double cap1 = (1 / n - (1 + w) / (n + p + 1)) / g.g1;
        const auto x0 = xi_eta(MatrixEstimatorKind::Xi0Eta0, fam, d, w, &c);
        CHECK(x0.xi >= cap1 - 1e-15);
        CHECK(x0.xi >= std::min(1.0, 1 / (n * g.g1)) - 1e-15);
        CHECK(x0.eta <= 1.0);
        CHECK(g.g1 * x0.xi <= std::max(1 / n, g.g1 * cap1) + 1e-15);
        for (auto k : {MatrixEstimatorKind::Xi1Eta1, MatrixEstimatorKind::Xi2Eta2}) {
          const auto x = xi_eta(k, fam, d, w, &c);
          CHECK(x.xi <= 1.0);
          CHECK(x.eta <= 1.0);
        }
        for (auto k : {MatrixEstimatorKind::Xi1TREta1, MatrixEstimatorKind::Xi2TREta2})
          CHECK(xi_eta(k, fam, d, w, &c).xi >= cap1 - 1e-15);
      }
    }
}

TEST_CASE("definiteness certificates hold on random draws") {
  CounterRng rng(RngStream{33, 0});
  for (const auto& d : kTable)
    for (const auto& fam : {ShrinkageFamily::james_stein(d), ShrinkageFamily::positive_part(d)}) {
      const auto c = matrix_constants(fam, d, beta_constants_quadrature(fam, d, 50));
      REQUIRE(c.xi1_eta1_certified);
      REQUIRE(c.xi2_eta2_certified);
      for (int i = 0; i < 5000; ++i) {
        const auto o = random_obs(d, rng);
        CHECK(estimate_mse_matrix(MatrixEstimatorKind::Xi0Eta0, o, fam, d, &c).min_eigenvalue() >= 0.0);
        for (auto k : {MatrixEstimatorKind::Xi1Eta1, MatrixEstimatorKind::Xi2Eta2, MatrixEstimatorKind::Xi1TREta1,
                       MatrixEstimatorKind::Xi2TREta2})
          CHECK(estimate_mse_matrix(k, o, fam, d, &c).min_eigenvalue() > 0.0);
      }
    }
}

TEST_CASE("risk-reduction matrix is the complement") {
  const ProblemDims d(5, 5);
  const auto jp = ShrinkageFamily::positive_part(d);
  const Observation o({0.3, 1.0, -0.2, 0.5, 0.1}, 2.0);
  const auto m = estimate_mse_matrix(MatrixEstimatorKind::Xi0Eta0, o, jp, d);
  const auto r = estimate_risk_reduction_matrix(MatrixEstimatorKind::Xi0Eta0, o, jp, d);
  CHECK(m.trace() + r.trace() == doctest::Approx(5 * 2.0 / 5));
}

TEST_CASE("kind names round-trip") {
  for (auto k : kAllMatrixKinds) CHECK(parse_matrix_kind(to_string(k)) == k);
  CHECK(parse_matrix_kind("xi2") == MatrixEstimatorKind::Xi2Eta2);
}
