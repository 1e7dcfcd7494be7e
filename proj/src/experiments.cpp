#include "stein/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <tuple>

#include "stein/distributions.hpp"
#include "stein/errors.hpp"
#include "stein/parallel.hpp"
#include "stein/umvue.hpp"

namespace stein {

namespace {

// Tags separating the random streams of different purposes.
enum : std::uint64_t { kTagAlpha = 1, kTagBeta, kTagTruth, kTagData, kTagUnbiased, kTagUnbiasedTruth };

std::uint64_t lambda_bits(double lambda) { return std::bit_cast<std::uint64_t>(lambda); }

RngStream data_stream(const ExperimentConfig& cfg, const ProblemDims& d, double lambda) {
  return {derive_seed(cfg.seed, {kTagData, std::uint64_t(d.p()), std::uint64_t(d.n()), lambda_bits(lambda)}), 0};
}

RngStream truth_stream(const ExperimentConfig& cfg, const ProblemDims& d, FamilyKind fam, double lambda) {
  return {derive_seed(cfg.seed, {kTagTruth, std::uint64_t(d.p()), std::uint64_t(d.n()), std::uint64_t(fam),
                                 lambda_bits(lambda)}),
          0};
}

// One draw of (X, S) at sigma^2 = 1.
Observation draw_observation(std::span<const double> theta, int n, CounterRng& rng) {
  std::vector<double> x(theta.begin(), theta.end());
  for (double& v : x) v += rng.normal();
  const double s = rng.chi2(n);
  return Observation(std::move(x), s);
}

double se_or_nan(const ColumnMoments& m, std::size_t c) { return m.count() > 1 ? m.stderr_of_mean(c) : NAN; }

bool needs_constants(MseEstimatorKind k) {
  return k != MseEstimatorKind::Umvue && k != MseEstimatorKind::TruncatedZero && k != MseEstimatorKind::Psi0;
}

bool needs_constants(MatrixEstimatorKind k) {
  return k != MatrixEstimatorKind::Umvue && k != MatrixEstimatorKind::Xi0Eta0;
}

// Half the spread of f over [x - se, x + se]; zero when se is zero.
double propagate(const std::function<double(double)>& f, double x, double se) {
  if (!(se > 0.0)) return 0.0;
  return 0.5 * std::abs(f(x + se) - f(x - se));
}

// Dense M(delta) = E(delta - theta)(delta - theta)', row major.
std::vector<double> true_mse_matrix(const ShrinkageFamily& fam, const ProblemDims& dims,
                                    std::span<const double> theta, std::uint64_t reps, const RngStream& stream,
                                    unsigned threads) {
  const std::size_t p = std::size_t(dims.p());
  const auto m = replicate(reps, p * p, threads, [&](std::uint64_t r, std::span<double> row) {
    CounterRng draw(stream.with_stream(r));
    const Observation obs = draw_observation(theta, dims.n(), draw);
    const auto delta = apply_estimator(obs, fam, dims).value;
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) row[i * p + j] = (delta[i] - theta[i]) * (delta[j] - theta[j]);
  });
  std::vector<double> out(p * p);
  for (std::size_t c = 0; c < p * p; ++c) out[c] = m.mean(c);
  return out;
}

double frobenius2_diff(const std::vector<double>& a, const std::vector<double>& b, double diag_shift) {
  const std::size_t p = std::size_t(std::llround(std::sqrt(double(a.size()))));
  double s = 0.0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      const double d = a[i * p + j] - b[i * p + j] - (i == j ? diag_shift : 0.0);
      s += d * d;
    }
  return s;
}

}  // namespace

std::vector<double> default_lambda_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 30; ++i) g.push_back(i);
  return g;
}

std::string_view family_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::JamesStein: return "js";
    case FamilyKind::PositivePart: return "js-plus";
    case FamilyKind::Custom: return "custom";
  }
  return "?";
}

std::optional<FamilyKind> parse_family(std::string_view name) {
  if (name == "js") return FamilyKind::JamesStein;
  if (name == "js-plus" || name == "js+") return FamilyKind::PositivePart;
  return std::nullopt;
}

ShrinkageFamily make_family(FamilyKind kind, const ProblemDims& dims) {
  switch (kind) {
    case FamilyKind::JamesStein: return ShrinkageFamily::james_stein(dims);
    case FamilyKind::PositivePart: return ShrinkageFamily::positive_part(dims);
    case FamilyKind::Custom: break;
  }
  throw DomainError("experiments run only the built-in shrinkage families");
}

void ExperimentConfig::validate() const {
  if (reps < 1) throw DomainError("reps must be >= 1");
  if (dims_list.empty()) throw DomainError("no (p, n) pairs given");
  if (lambda_grid.empty()) throw DomainError("lambda grid is empty");
  for (double l : lambda_grid)
    if (!(l >= 0.0) || !std::isfinite(l)) throw DomainError("lambda values must be finite and >= 0");
  if (families.empty()) throw DomainError("no shrinkage families given");
  for (auto f : families)
    if (f == FamilyKind::Custom) throw DomainError("experiments run only the built-in shrinkage families");
  if (truth_multiplier < 1) throw DomainError("truth multiplier must be >= 1");
  if (constants_reps < 2) throw DomainError("constants need at least 2 replications");
  if (constants_method == ConstantsMethod::ClosedForm) throw DomainError("constants method must be monte-carlo or quadrature");
  if (theta_direction == ThetaDirection::Custom) {
    double norm2 = 0.0;
    for (double v : custom_direction) norm2 += v * v;
    if (!(norm2 > 0.0)) throw DomainError("custom theta direction must be a nonzero vector");
    for (const auto& d : dims_list)
      if (custom_direction.size() != std::size_t(d.p()))
        throw DomainError("custom theta direction length differs from p");
  }
}

std::vector<double> theta_for(const ExperimentConfig& cfg, const ProblemDims& dims, double lambda) {
  const std::size_t p = std::size_t(dims.p());
  std::vector<double> theta(p, 0.0);
  switch (cfg.theta_direction) {
    case ThetaDirection::EqualCoordinates: theta.assign(p, std::sqrt(lambda / double(p))); break;
    case ThetaDirection::FirstAxis: theta[0] = std::sqrt(lambda); break;
    case ThetaDirection::Custom: {
      if (cfg.custom_direction.size() != p) throw DomainError("custom theta direction length differs from p");
      double norm2 = 0.0;
      for (double v : cfg.custom_direction) norm2 += v * v;
      const double scale = std::sqrt(lambda / norm2);
      for (std::size_t i = 0; i < p; ++i) theta[i] = scale * cfg.custom_direction[i];
      break;
    }
  }
  return theta;
}

FamilyConstants compute_constants(const ShrinkageFamily& fam, const ProblemDims& dims, const ExperimentConfig& cfg) {
  const auto tag = [&](std::uint64_t t) {
    return RngStream{derive_seed(cfg.seed, {t, std::uint64_t(dims.p()), std::uint64_t(dims.n()),
                                            std::uint64_t(fam.kind())}),
                     0};
  };
  const bool quad = cfg.constants_method == ConstantsMethod::Quadrature;
  AlphaEstimate alpha = fam.kind() == FamilyKind::JamesStein
                            ? AlphaEstimate{alpha_js(dims), 0.0, {ConstantsMethod::ClosedForm, 0}}
                        : quad ? alpha_pn_quadrature(fam, dims)
                               : alpha_pn(fam, dims, cfg.constants_reps, tag(kTagAlpha), cfg.threads);
  BetaConstants beta = quad ? beta_constants_quadrature(fam, dims, cfg.j_max, cfg.threads)
                            : beta_constants(fam, dims, cfg.j_max, cfg.constants_reps, tag(kTagBeta), cfg.threads);
  return {shrinkage_constants(fam, dims, alpha), matrix_constants(fam, dims, std::move(beta), cfg.matrix_options)};
}

std::string_view to_string(LossKind loss) { return loss == LossKind::Mse ? "mse" : "risk-reduction"; }

CsvTable RiskTable::to_csv(std::string name) const {
  CsvTable t{std::move(name),
             {"p", "n", "family", "lambda", "loss", "estimator", "risk", "stderr", "diff_vs_umvue", "diff_stderr",
              "truth"},
             {}};
  for (const auto& r : rows)
    t.rows.push_back({std::to_string(r.p), std::to_string(r.n), r.family, format_number(r.lambda),
                      std::string(to_string(r.loss)), r.estimator, format_number(r.risk), format_number(r.std_error),
                      format_number(r.diff_vs_umvue), format_number(r.diff_stderr), format_number(r.truth)});
  return t;
}

CsvTable CoverageTable::to_csv(std::string name) const {
  CsvTable t{std::move(name),
             {"p", "n", "family", "lambda", "variant", "coverage", "stderr", "mean_volume", "volume_ratio"},
             {}};
  for (const auto& r : rows)
    t.rows.push_back({std::to_string(r.p), std::to_string(r.n), r.family, format_number(r.lambda), r.variant,
                      format_number(r.coverage), format_number(r.std_error), format_number(r.mean_volume),
                      format_number(r.volume_ratio)});
  return t;
}

RiskTable run_mse_risk_curve(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto& kinds = cfg.mse_kinds;
  const std::size_t k = kinds.size();
  const bool any_constants = std::any_of(kinds.begin(), kinds.end(), [](auto x) { return needs_constants(x); });
  RiskTable table;
  for (const auto& dims : cfg.dims_list) {
    for (auto fk : cfg.families) {
      const ShrinkageFamily fam = make_family(fk, dims);
      std::optional<ShrinkageConstants> consts;
      if (any_constants) consts = compute_constants(fam, dims, cfg).scalar;
      const double p = dims.p();
      const double n = dims.n();
      std::map<double, double> truth_cache;
      for (double lambda : cfg.lambda_grid) {
        auto [it, fresh] = truth_cache.try_emplace(lambda, 0.0);
        if (fresh)
          it->second = true_risk(fam, dims, lambda, cfg.reps * cfg.truth_multiplier,
                                 truth_stream(cfg, dims, fk, lambda), cfg.threads)
                           .value;
        const double risk = it->second;
        const double reduction = p - risk;
        const auto theta = theta_for(cfg, dims, lambda);
        const RngStream stream = data_stream(cfg, dims, lambda);
        // Columns: [mse loss, rr loss] per kind, then the paired differences.
        const auto m = replicate(cfg.reps, 4 * k, cfg.threads, [&](std::uint64_t r, std::span<double> row) {
          CounterRng draw(stream.with_stream(r));
          const Observation obs = draw_observation(theta, dims.n(), draw);
          const double base = p * obs.s() / n;
          const double r0 = umvue_mse(obs, fam, dims);
          const double l0 = (r0 - risk) * (r0 - risk);
          const double l0_rr = (base - r0 - reduction) * (base - r0 - reduction);
          for (std::size_t i = 0; i < k; ++i) {
            const double v = estimate_mse(kinds[i], obs, fam, dims, consts ? &*consts : nullptr);
            const double l = (v - risk) * (v - risk);
            const double l_rr = (base - v - reduction) * (base - v - reduction);
            row[2 * i] = l;
            row[2 * i + 1] = l_rr;
            row[2 * k + 2 * i] = l - l0;
            row[2 * k + 2 * i + 1] = l_rr - l0_rr;
          }
        });
        for (std::size_t i = 0; i < k; ++i)
          for (int loss = 0; loss < 2; ++loss) {
            const std::size_t c = 2 * i + std::size_t(loss);
            table.rows.push_back({dims.p(), dims.n(), std::string(family_name(fk)), lambda,
                                  loss == 0 ? LossKind::Mse : LossKind::RiskReduction,
                                  std::string(to_string(kinds[i])), m.mean(c), se_or_nan(m, c), m.mean(2 * k + c),
                                  se_or_nan(m, 2 * k + c), loss == 0 ? risk : reduction});
          }
      }
    }
  }
  return table;
}

RiskTable run_matrix_risk_curve(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto& kinds = cfg.matrix_kinds;
  const std::size_t k = kinds.size();
  const bool any_constants = std::any_of(kinds.begin(), kinds.end(), [](auto x) { return needs_constants(x); });
  RiskTable table;
  for (const auto& dims : cfg.dims_list) {
    for (auto fk : cfg.families) {
      const ShrinkageFamily fam = make_family(fk, dims);
      std::optional<MatrixConstants> consts;
      if (any_constants) consts = compute_constants(fam, dims, cfg).matrix;
      const std::size_t p = std::size_t(dims.p());
      const double n = dims.n();
      std::map<double, std::vector<double>> truth_cache;
      for (double lambda : cfg.lambda_grid) {
        const auto theta = theta_for(cfg, dims, lambda);
        auto [it, fresh] = truth_cache.try_emplace(lambda);
        if (fresh)
          it->second = true_mse_matrix(fam, dims, theta, cfg.reps * cfg.truth_multiplier,
                                       truth_stream(cfg, dims, fk, lambda), cfg.threads);
        const std::vector<double>& truth = it->second;
        double truth_trace = 0.0;
        for (std::size_t i = 0; i < p; ++i) truth_trace += truth[i * p + i];
        const RngStream stream = data_stream(cfg, dims, lambda);
        const auto m = replicate(cfg.reps, 4 * k, cfg.threads, [&](std::uint64_t r, std::span<double> row) {
          CounterRng draw(stream.with_stream(r));
          const Observation obs = draw_observation(theta, dims.n(), draw);
          // M*_hat - M* = (S/n - 1) I - (M_hat - M).
          const double shift = obs.s() / n - 1.0;
          const auto u0 = umvue_mse_matrix(obs, fam, dims).to_dense();
          const double l0 = frobenius2_diff(u0, truth, 0.0);
          const double l0_rr = frobenius2_diff(u0, truth, shift);
          for (std::size_t i = 0; i < k; ++i) {
            const auto est = estimate_mse_matrix(kinds[i], obs, fam, dims, consts ? &*consts : nullptr).to_dense();
            const double l = frobenius2_diff(est, truth, 0.0);
            const double l_rr = frobenius2_diff(est, truth, shift);
            row[2 * i] = l;
            row[2 * i + 1] = l_rr;
            row[2 * k + 2 * i] = l - l0;
            row[2 * k + 2 * i + 1] = l_rr - l0_rr;
          }
        });
        for (std::size_t i = 0; i < k; ++i)
          for (int loss = 0; loss < 2; ++loss) {
            const std::size_t c = 2 * i + std::size_t(loss);
            table.rows.push_back({dims.p(), dims.n(), std::string(family_name(fk)), lambda,
                                  loss == 0 ? LossKind::Mse : LossKind::RiskReduction,
                                  std::string(to_string(kinds[i])), m.mean(c), se_or_nan(m, c), m.mean(2 * k + c),
                                  se_or_nan(m, 2 * k + c), loss == 0 ? truth_trace : double(p) - truth_trace});
          }
      }
    }
  }
  return table;
}

CoverageTable run_coverage_curve(const ExperimentConfig& cfg, const std::vector<ConfidenceSpec>& variants) {
  cfg.validate();
  if (variants.empty()) throw DomainError("no confidence variants given");
  const std::size_t k = variants.size();
  const bool any_constants = std::any_of(variants.begin(), variants.end(), [](const ConfidenceSpec& s) {
    return s.variant != ConfidenceVariant::C0 && s.variant != ConfidenceVariant::C3;
  });
  CoverageTable table;
  for (const auto& dims : cfg.dims_list) {
    // Critical values once per (p, n) and level.
    std::vector<ConfidenceSpec> specs = variants;
    for (auto& s : specs)
      if (!s.critical_value) s.critical_value = f_quantile(s.level, dims.p(), dims.n());
    ConfidenceSpec c0{ConfidenceVariant::C0, 0.95, f_quantile(0.95, dims.p(), dims.n())};
    for (auto fk : cfg.families) {
      const ShrinkageFamily fam = make_family(fk, dims);
      std::optional<MatrixConstants> consts;
      if (any_constants) consts = compute_constants(fam, dims, cfg).matrix;
      for (double lambda : cfg.lambda_grid) {
        const auto theta = theta_for(cfg, dims, lambda);
        const RngStream stream = data_stream(cfg, dims, lambda);
        // Columns: [covered, volume] per variant, then the C0 volume.
        const auto m = replicate(cfg.reps, 2 * k + 1, cfg.threads, [&](std::uint64_t r, std::span<double> row) {
          CounterRng draw(stream.with_stream(r));
          const Observation obs = draw_observation(theta, dims.n(), draw);
          for (std::size_t i = 0; i < k; ++i) {
            const auto res = build_confidence_set(specs[i], obs, fam, dims, consts ? &*consts : nullptr,
                                                  std::span<const double>(theta));
            row[2 * i] = *res.contains_truth ? 1.0 : 0.0;
            row[2 * i + 1] = res.volume;
          }
          row[2 * k] = build_confidence_set(c0, obs, fam, dims).volume;
        });
        for (std::size_t i = 0; i < k; ++i)
          table.rows.push_back({dims.p(), dims.n(), std::string(family_name(fk)), lambda,
                                std::string(to_string(variants[i].variant)), m.mean(2 * i), se_or_nan(m, 2 * i),
                                m.mean(2 * i + 1), m.mean(2 * i + 1) / m.mean(2 * k)});
      }
    }
  }
  return table;
}

std::vector<CsvTable> reproduce_tables(const ExperimentConfig& cfg) {
  cfg.validate();
  CsvTable t1{"gamma_pn", {"family", "p", "n", "gamma", "gamma_stderr", "alpha", "alpha_stderr", "method"}, {}};
  CsvTable t2{"w_pn", {"family", "p", "n", "w", "w_stderr", "method"}, {}};
  CsvTable t3{"beta2",
              {"family", "p", "n", "beta2", "beta2_stderr", "beta2_j", "beta1", "beta1_stderr", "beta1_j",
               "boundary_warning", "method"},
              {}};
  CsvTable t4{"gamma_xi_eta", {"family", "p", "n", "gamma_xi", "gamma_xi_stderr", "gamma_eta", "gamma_eta_stderr"}, {}};
  CsvTable t5{"w_xi_eta", {"family", "p", "n", "w_xi", "w_xi_stderr", "w_eta", "w_eta_stderr"}, {}};
  CsvTable tj{"beta_j", {"family", "p", "n", "j", "beta1", "beta1_stderr", "beta2", "beta2_stderr"}, {}};

  for (auto fk : cfg.families) {
    for (const auto& dims : cfg.dims_list) {
      const ShrinkageFamily fam = make_family(fk, dims);
      const FamilyConstants c = compute_constants(fam, dims, cfg);
      const std::string name(family_name(fk));
      const std::string ps = std::to_string(dims.p());
      const std::string ns = std::to_string(dims.n());
      const auto& s = c.scalar;
      const std::string alpha_method(to_string(s.provenance.method));

      auto w_of_alpha = [&](double a) { return solve_w_pn(fam, dims, a); };
      const double w_se = propagate(w_of_alpha, s.alpha, s.alpha_stderr);
      const double g_se = dims.n() * w_se / (dims.n() + dims.p() + 2.0);
      t1.rows.push_back({name, ps, ns, format_number(s.gamma), format_number(g_se), format_number(s.alpha),
                         format_number(s.alpha_stderr), alpha_method});
      t2.rows.push_back({name, ps, ns, format_number(s.w_pn), format_number(w_se), alpha_method});

      const auto& b = c.matrix.beta;
      const std::string beta_method(to_string(b.provenance.method));
      t3.rows.push_back({name, ps, ns, format_number(b.beta2), format_number(b.beta2_stderr),
                         std::to_string(b.beta2_j), format_number(b.beta1), format_number(b.beta1_stderr),
                         std::to_string(b.beta1_j), b.boundary_warning ? "1" : "0", beta_method});

      auto roots_at = [&](double beta2) { return solve_w_xi_eta(fam, dims, beta2); };
      auto spread = [&](auto pick) -> std::optional<double> {
        if (!(b.beta2_stderr > 0.0)) return 0.0;
        const auto lo = pick(b.beta2 - b.beta2_stderr);
        const auto hi = pick(b.beta2 + b.beta2_stderr);
        if (!lo || !hi) return std::nullopt;
        return 0.5 * std::abs(*hi - *lo);
      };
      const auto wxi_se = spread([&](double x) { return roots_at(x).w_xi; });
      const auto weta_se = spread([&](double x) { return roots_at(x).w_eta; });
      const auto gxi_se = spread([&](double x) { return gamma_xi_eta(dims, roots_at(x), x).gamma_xi; });
      const auto geta_se = spread([&](double x) { return gamma_xi_eta(dims, roots_at(x), x).gamma_eta; });
      const auto& r = c.matrix.roots;
      const auto& g = c.matrix.gammas;
      t4.rows.push_back({name, ps, ns, format_optional(g.gamma_xi), g.gamma_xi ? format_optional(gxi_se) : "NA",
                         format_optional(g.gamma_eta), g.gamma_eta ? format_optional(geta_se) : "NA"});
      t5.rows.push_back({name, ps, ns, format_optional(r.w_xi), r.w_xi ? format_optional(wxi_se) : "NA",
                         format_optional(r.w_eta), r.w_eta ? format_optional(weta_se) : "NA"});

      for (std::size_t i = 0; i < b.per_j1.size(); ++i)
        tj.rows.push_back({name, ps, ns, std::to_string(b.per_j1[i].j), format_number(b.per_j1[i].value),
                           format_number(b.per_j1[i].std_error), format_number(b.per_j2[i].value),
                           format_number(b.per_j2[i].std_error)});
    }
  }
  return {t1, t2, t3, t4, t5, tj};
}

double UnbiasednessCheck::z() const {
  const double se = std::sqrt(estimate_stderr * estimate_stderr + truth_stderr * truth_stderr);
  return (mean_estimate - truth) / se;
}

UnbiasednessCheck umvue_unbiasedness(const ShrinkageFamily& fam, const ProblemDims& dims, double lambda,
                                     std::uint64_t reps, std::uint64_t seed, unsigned threads) {
  if (reps < 2) throw DomainError("unbiasedness check needs reps >= 2");
  const std::vector<double> theta(std::size_t(dims.p()), std::sqrt(lambda / dims.p()));
  const RngStream stream{derive_seed(seed, {kTagUnbiased, std::uint64_t(dims.p()), std::uint64_t(dims.n()),
                                            lambda_bits(lambda)}),
                         0};
  const auto m = replicate(reps, 1, threads, [&](std::uint64_t r, std::span<double> row) {
    CounterRng draw(stream.with_stream(r));
    row[0] = umvue_mse(draw_observation(theta, dims.n(), draw), fam, dims);
  });
  const RngStream truth{derive_seed(seed, {kTagUnbiasedTruth, std::uint64_t(dims.p()), std::uint64_t(dims.n()),
                                           lambda_bits(lambda)}),
                        0};
  const McEstimate t = true_risk(fam, dims, lambda, reps * 10, truth, threads);
  return {m.mean(0), m.stderr_of_mean(0), t.value, t.std_error};
}

std::string plot_script() {
  return R"PY(#!/usr/bin/env python3
"""Plot the CSV files written by `stein`. Usage: python3 plot.py [DIR]"""
import csv
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

root = sys.argv[1] if len(sys.argv) > 1 else os.path.dirname(os.path.abspath(__file__))


def rows(name):
    path = os.path.join(root, name)
    if not os.path.exists(path):
        return []
    with open(path) as f:
        return list(csv.DictReader(f))


def curves(data, key, value):
    out = {}
    for r in data:
        out.setdefault(key(r), []).append((float(r["lambda"]), float(r[value])))
    return out


for name in ("mse_risk.csv", "matrix_risk.csv"):
    data = rows(name)
    if not data:
        continue
    for loss in sorted({r["loss"] for r in data}):
        fig, ax = plt.subplots()
        sel = [r for r in data if r["loss"] == loss]
        for label, pts in sorted(curves(sel, lambda r: (r["p"], r["n"], r["family"], r["estimator"]), "risk").items()):
            pts.sort()
            ax.plot([x for x, _ in pts], [y for _, y in pts], label=" ".join(label))
        ax.set_xlabel("lambda")
        ax.set_ylabel("risk")
        ax.legend(fontsize="small")
        fig.savefig(os.path.join(root, name.replace(".csv", f"_{loss}.png")), dpi=120)

data = rows("coverage.csv")
if data:
    fig, (top, bottom) = plt.subplots(2, 1, sharex=True)
    for label, pts in sorted(curves(data, lambda r: (r["p"], r["n"], r["variant"]), "coverage").items()):
        pts.sort()
        top.plot([x for x, _ in pts], [y for _, y in pts], label=" ".join(label))
    for label, pts in sorted(curves(data, lambda r: (r["p"], r["n"], r["variant"]), "volume_ratio").items()):
        pts.sort()
        bottom.plot([x for x, _ in pts], [y for _, y in pts], label=" ".join(label))
    top.axhline(0.95, color="grey", linestyle=":")
    top.set_ylabel("coverage")
    bottom.set_ylabel("volume / volume(c0)")
    bottom.set_xlabel("lambda")
    top.legend(fontsize="small")
    fig.savefig(os.path.join(root, "coverage.png"), dpi=120)

data = rows("beta_j.csv")
if data:
    for col in ("beta1", "beta2"):
        fig, ax = plt.subplots()
        groups = {}
        for r in data:
            groups.setdefault((r["family"], r["p"], r["n"]), []).append((int(r["j"]), float(r[col])))
        for label, pts in sorted(groups.items()):
            pts.sort()
            ax.plot([x for x, _ in pts if x <= 50], [y for x, y in pts if x <= 50], label=" ".join(label))
        ax.set_xlabel("j")
        ax.set_ylabel(col)
        ax.legend(fontsize="small")
        fig.savefig(os.path.join(root, f"{col}_j.png"), dpi=120)
)PY";
}

}  // namespace stein
