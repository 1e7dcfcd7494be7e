#include "stein/matrix_improved.hpp"

#include <algorithm>
#include <cmath>

#include "stein/distributions.hpp"
#include "stein/errors.hpp"
#include "stein/numerics.hpp"
#include "stein/parallel.hpp"
#include "stein/umvue.hpp"

namespace stein {

namespace {

// Log grid for root bracketing and certificate scans.
std::vector<double> scan_grid() {
  std::vector<double> w;
  for (int i = 0; i <= 640; ++i) w.push_back(std::pow(10.0, -8.0 + 16.0 * i / 640.0));
  return w;
}

std::vector<int> beta_orders_j(int j_max) {
  std::vector<int> js;
  for (int j = 0; j <= j_max; ++j) js.push_back(j);
  js.push_back(2 * j_max);
  js.push_back(4 * j_max);
  return js;
}

// Both orders on shared draws.
ColumnMoments beta_pass(const ShrinkageFamily& fam, const ProblemDims& dims, int j, std::uint64_t reps,
                        const RngStream& rng, unsigned threads) {
  const RngStream base{derive_seed(rng.seed, {rng.stream_id, std::uint64_t(j)}), 0};
  const double df_u = dims.p() + 2.0 * j;
  return replicate(reps, 2, threads, [&](std::uint64_t r, std::span<double> row) {
    CounterRng draw(base.with_stream(r));
    const double w = draw.chi2(df_u) / draw.chi2(dims.n());
    row[0] = beta_integrand(1, fam, dims, j, w);
    row[1] = beta_integrand(2, fam, dims, j, w);
  });
}

void check_order(int order) {
  if (order != 1 && order != 2) throw DomainError("beta order must be 1 or 2");
}

void summarize(BetaConstants& out) {
  auto lo = std::min_element(out.per_j1.begin(), out.per_j1.end(),
                             [](const BetaJ& a, const BetaJ& b) { return a.value < b.value; });
  auto hi = std::max_element(out.per_j2.begin(), out.per_j2.end(),
                             [](const BetaJ& a, const BetaJ& b) { return a.value < b.value; });
  out.beta1 = lo->value;
  out.beta1_j = lo->j;
  out.beta1_stderr = lo->std_error;
  out.beta2 = hi->value;
  out.beta2_j = hi->j;
  out.beta2_stderr = hi->std_error;
  out.boundary_warning = out.beta1_j >= out.j_max || out.beta2_j >= out.j_max;
}

// First root of f on the scan grid. nullopt if f >= 0 throughout.
std::optional<double> first_drop_root(const std::function<double(double)>& f, const char* what) {
  const auto grid = scan_grid();
  double prev_w = grid.front();
  double prev_f = f(prev_w);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double fw = f(grid[i]);
    if ((prev_f < 0.0) != (fw < 0.0)) return bisect(f, prev_w, grid[i]);
    prev_w = grid[i];
    prev_f = fw;
  }
  if (prev_f >= 0.0) return std::nullopt;
  throw NumericalError(std::string("equation for ") + what + " has no root on [1e-8, 1e8]");
}

}  // namespace

std::string_view to_string(MatrixEstimatorKind kind) {
  switch (kind) {
    case MatrixEstimatorKind::Umvue: return "umvue";
    case MatrixEstimatorKind::Xi0Eta0: return "xi0-eta0";
    case MatrixEstimatorKind::Xi1Eta1: return "xi1-eta1";
    case MatrixEstimatorKind::Xi2Eta2: return "xi2-eta2";
    case MatrixEstimatorKind::Xi1TREta1: return "xi1tr-eta1";
    case MatrixEstimatorKind::Xi2TREta2: return "xi2tr-eta2";
  }
  return "?";
}

std::optional<MatrixEstimatorKind> parse_matrix_kind(std::string_view name) {
  for (auto k : kAllMatrixKinds)
    if (to_string(k) == name) return k;
  if (name == "xi0") return MatrixEstimatorKind::Xi0Eta0;
  if (name == "xi1") return MatrixEstimatorKind::Xi1Eta1;
  if (name == "xi2") return MatrixEstimatorKind::Xi2Eta2;
  if (name == "xi1-tr" || name == "xi1tr") return MatrixEstimatorKind::Xi1TREta1;
  if (name == "xi2-tr" || name == "xi2tr") return MatrixEstimatorKind::Xi2TREta2;
  return std::nullopt;
}

double b_of_w(const ShrinkageFamily& fam, const ProblemDims& dims, double w) {
  if (!(w > 0.0)) throw DomainError("b(W) needs W > 0");
  const double phi = fam.phi(w);
  const double dphi = fam.phi_prime(w);
  return 4.0 * phi / w + (dims.n() + 2.0) * phi * phi / w - 4.0 * dphi - 4.0 * phi * dphi;
}

double beta_integrand(int order, const ShrinkageFamily& fam, const ProblemDims& dims, int j, double w) {
  check_order(order);
  const double p = dims.p();
  const double m = p + 2.0 * j;
  const double phi_over_w = fam.phi(w) / w;
  const double b = b_of_w(fam, dims, w);
  if (order == 1) return 2.0 * (p - 1.0) * phi_over_w - (m - 1.0) * b / m;
  return 2.0 * phi_over_w - b / m;
}

BetaJ beta_j(int order, const ShrinkageFamily& fam, const ProblemDims& dims, int j, std::uint64_t reps,
             const RngStream& rng, unsigned threads) {
  check_order(order);
  if (j < 0) throw DomainError("j must be >= 0");
  if (reps < 1) throw DomainError("beta_j needs reps >= 1");
  fam.check_dims(dims);
  const auto m = beta_pass(fam, dims, j, reps, rng, threads);
  const std::size_t c = std::size_t(order - 1);
  return {j, m.mean(c), m.count() > 1 ? m.stderr_of_mean(c) : 0.0};
}

BetaJ beta_j_quadrature(int order, const ShrinkageFamily& fam, const ProblemDims& dims, int j) {
  check_order(order);
  if (j < 0) throw DomainError("j must be >= 0");
  fam.check_dims(dims);
  const double df = dims.p() + 2.0 * j;
  // The two terms of the integrand can cancel exactly (James-Stein with
  // m(2(p-1)k) = (m-1)(4k+(n+2)k^2)), so the error target is set relative
  // to the size of the terms rather than of their difference.
  const double p = dims.p();
  const double m = df;
  const double scale = expect_chi2_ratio(
      [&](double w) {
        const double a = std::abs(fam.phi(w) / w) * (order == 1 ? 2.0 * (p - 1.0) : 2.0);
        const double b = std::abs(b_of_w(fam, dims, w)) * (order == 1 ? (m - 1.0) / m : 1.0 / m);
        return a + b;
      },
      df, dims.n(), fam.kinks());
  const double v = expect_chi2_ratio([&](double w) { return beta_integrand(order, fam, dims, j, w); }, df, dims.n(),
                                     fam.kinks(), 1e-12 * scale);
  return {j, v, 0.0};
}

BetaConstants beta_constants(const ShrinkageFamily& fam, const ProblemDims& dims, int j_max, std::uint64_t reps,
                             const RngStream& rng, unsigned threads) {
  if (j_max < 10) throw DomainError("beta constants need j_max >= 10");
  if (reps < 1) throw DomainError("beta constants need reps >= 1");
  fam.check_dims(dims);
  BetaConstants out;
  out.j_max = j_max;
  out.provenance = {ConstantsMethod::MonteCarlo, reps};
  for (int j : beta_orders_j(j_max)) {
    const auto m = beta_pass(fam, dims, j, reps, rng, threads);
    const double se1 = m.count() > 1 ? m.stderr_of_mean(0) : 0.0;
    const double se2 = m.count() > 1 ? m.stderr_of_mean(1) : 0.0;
    out.per_j1.push_back({j, m.mean(0), se1});
    out.per_j2.push_back({j, m.mean(1), se2});
  }
  summarize(out);
  return out;
}

BetaConstants beta_constants_quadrature(const ShrinkageFamily& fam, const ProblemDims& dims, int j_max,
                                        unsigned threads) {
  if (j_max < 10) throw DomainError("beta constants need j_max >= 10");
  fam.check_dims(dims);
  const auto js = beta_orders_j(j_max);
  BetaConstants out;
  out.j_max = j_max;
  out.provenance = {ConstantsMethod::Quadrature, 0};
  out.per_j1.resize(js.size());
  out.per_j2.resize(js.size());
  parallel_for(js.size(), threads, [&](std::size_t i) {
    out.per_j1[i] = beta_j_quadrature(1, fam, dims, js[i]);
    out.per_j2[i] = beta_j_quadrature(2, fam, dims, js[i]);
  });
  summarize(out);
  return out;
}

XiEtaRoots solve_w_xi_eta(const ShrinkageFamily& fam, const ProblemDims& dims, double beta2) {
  if (!(beta2 > 0.0)) throw DomainError("beta2 must be positive");
  const double denom = dims.n() + dims.p() + 2.0;
  XiEtaRoots roots;
  roots.w_xi = first_drop_root(
      [&](double w) { return (1.0 + w) * beta2 / (denom * g_values(fam, dims, w).g1) - 1.0; }, "W_xi");
  roots.w_eta = first_drop_root(
      [&](double w) {
        const GValues g = g_values(fam, dims, w);
        return (g.g3 + (1.0 + w) * beta2 / denom) / g.g1 - 1.0;
      },
      "W_eta");
  return roots;
}

XiEtaGammas gamma_xi_eta(const ProblemDims& dims, const XiEtaRoots& roots, double beta2) {
  const double scale = dims.n() * beta2 / (dims.n() + dims.p() + 2.0);
  XiEtaGammas g;
  if (roots.w_xi) g.gamma_xi = scale * (1.0 + *roots.w_xi);
  if (roots.w_eta) g.gamma_eta = scale * (1.0 + *roots.w_eta);
  return g;
}

MatrixConstants matrix_constants(const ShrinkageFamily& fam, const ProblemDims& dims, BetaConstants beta,
                                 MatrixOptions options) {
  MatrixConstants c;
  c.beta = std::move(beta);
  c.options = options;
  c.roots = solve_w_xi_eta(fam, dims, c.beta.beta2);
  c.gammas = gamma_xi_eta(dims, c.roots, c.beta.beta2);

  const double inv_n = 1.0 / dims.n();
  bool xi_ok = c.gammas.gamma_xi ? *c.gammas.gamma_xi < 1.0 : true;
  bool eta_ok = c.gammas.gamma_eta ? *c.gammas.gamma_eta < 1.0 : true;
  // Without a root the rule is identically one; check the resulting eigenvalue factor directly.
  if (!c.roots.w_xi || !c.roots.w_eta) {
    for (double w : scan_grid()) {
      const GValues g = g_values(fam, dims, w);
      if (!c.roots.w_xi && !(inv_n - g.g1 > 0.0)) xi_ok = false;
      if (!c.roots.w_eta && !(inv_n + g.g3 - g.g1 > 0.0)) eta_ok = false;
    }
  }
  c.xi1_eta1_certified = xi_ok && eta_ok;
  c.xi2_eta2_certified = c.beta.beta2 / (dims.n() + 2.0) < inv_n;
  return c;
}

namespace {

// The products g1 xi and g1 eta, formed without dividing by g1 so that a
// binding cap gives an eigenvalue of exactly zero.
struct Reductions {
  double xi = 0.0;
  double eta = 0.0;
};

Reductions reductions(MatrixEstimatorKind kind, const ProblemDims& dims, double w, const GValues& g,
                      const MatrixConstants* consts) {
  if (kind == MatrixEstimatorKind::Umvue || g.g1 == 0.0) return {g.g1, g.g1};
  if (g.g1 < 0.0) throw DomainError("matrix estimators assume g1(W) > 0");

  const double n = dims.n();
  const double p = dims.p();
  const double inv_n = 1.0 / n;
  const MatrixOptions opts = consts ? consts->options : MatrixOptions{};
  auto lower_cap = [&](int offset) { return inv_n - (1.0 + w) / (n + p + offset); };

  if (kind == MatrixEstimatorKind::Xi0Eta0)
    return {std::max(std::min(g.g1, inv_n), lower_cap(opts.xi0_offset)), std::min(g.g1, inv_n + g.g3)};

  if (!consts) throw MissingConstants(std::string(to_string(kind)) + " needs beta and root constants");
  const double beta2 = consts->beta.beta2;
  Reductions out{g.g1, g.g1};
  if (kind == MatrixEstimatorKind::Xi1Eta1 || kind == MatrixEstimatorKind::Xi1TREta1) {
    const double denom = n + p + 2.0;
    if (consts->roots.w_xi) out.xi = std::min(g.g1, (1.0 + *consts->roots.w_xi) * beta2 / denom);
    if (consts->roots.w_eta) out.eta = std::min(g.g1, g.g3 + (1.0 + *consts->roots.w_eta) * beta2 / denom);
  } else {
    out.xi = std::min(g.g1, beta2 / (n + 2.0));
    out.eta = std::min(g.g1, g.g3 + beta2 / (n + 2.0));
  }
  if (kind == MatrixEstimatorKind::Xi1TREta1 || kind == MatrixEstimatorKind::Xi2TREta2)
    out.xi = std::max(out.xi, lower_cap(opts.tr_offset));
  return out;
}

}  // namespace

XiEta xi_eta(MatrixEstimatorKind kind, const ShrinkageFamily& fam, const ProblemDims& dims, double w,
             const MatrixConstants* consts) {
  if (kind == MatrixEstimatorKind::Umvue) return {};
  const GValues g = g_values(fam, dims, w);
  const Reductions r = reductions(kind, dims, w, g, consts);
  if (g.g1 == 0.0) return {};
  return {r.xi / g.g1, r.eta / g.g1};
}

AxialMatrix estimate_mse_matrix(MatrixEstimatorKind kind, const Observation& obs, const ShrinkageFamily& fam,
                                const ProblemDims& dims, const MatrixConstants* consts) {
  if (kind == MatrixEstimatorKind::Umvue) return umvue_mse_matrix(obs, fam, dims);
  if (obs.size() != std::size_t(dims.p())) throw DomainError("observation length differs from p");
  const double w = obs.w();
  if (!(w > 0.0)) throw DomainError("matrix estimators need W > 0");
  const GValues g = g_values(fam, dims, w);
  const Reductions r = reductions(kind, dims, w, g, consts);
  const double inv_n = 1.0 / dims.n();
  return AxialMatrix::from_eigen(obs.s(), (inv_n + g.g3) - r.eta, inv_n - r.xi, unit_axis(obs));
}

AxialMatrix estimate_risk_reduction_matrix(MatrixEstimatorKind kind, const Observation& obs,
                                           const ShrinkageFamily& fam, const ProblemDims& dims,
                                           const MatrixConstants* consts) {
  return estimate_mse_matrix(kind, obs, fam, dims, consts).complement(dims.n());
}

}  // namespace stein
