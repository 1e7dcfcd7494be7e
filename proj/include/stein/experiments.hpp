#pragma once

// Monte Carlo risk, coverage and constants experiments at sigma^2 = 1.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stein/confidence.hpp"
#include "stein/csv.hpp"
#include "stein/matrix_improved.hpp"
#include "stein/mse_improved.hpp"
#include "stein/problem.hpp"
#include "stein/shrinkage.hpp"

namespace stein {

enum class ThetaDirection { EqualCoordinates, FirstAxis, Custom };

/// 0, 1, ..., 30.
std::vector<double> default_lambda_grid();

std::string_view family_name(FamilyKind kind);
std::optional<FamilyKind> parse_family(std::string_view name);
/// Built-in family for `kind` (JamesStein or PositivePart).
ShrinkageFamily make_family(FamilyKind kind, const ProblemDims& dims);

struct ExperimentConfig {
  std::vector<ProblemDims> dims_list{ProblemDims(5, 5)};
  std::vector<double> lambda_grid = default_lambda_grid();
  std::uint64_t reps = 100000;
  std::uint64_t seed = 0;
  std::vector<FamilyKind> families{FamilyKind::PositivePart};
  std::vector<MseEstimatorKind> mse_kinds{std::begin(kAllMseKinds), std::end(kAllMseKinds)};
  std::vector<MatrixEstimatorKind> matrix_kinds{std::begin(kAllMatrixKinds), std::end(kAllMatrixKinds)};
  ThetaDirection theta_direction = ThetaDirection::EqualCoordinates;
  std::vector<double> custom_direction;
  unsigned threads = 1;
  /// True risks use reps * truth_multiplier replications.
  std::uint64_t truth_multiplier = 10;
  /// Replications for Monte Carlo alpha and beta constants.
  std::uint64_t constants_reps = 1000000;
  int j_max = 50;
  /// MonteCarlo or Quadrature (James-Stein alpha is always closed form).
  ConstantsMethod constants_method = ConstantsMethod::MonteCarlo;
  MatrixOptions matrix_options;

  /// Throws DomainError on an invalid configuration.
  void validate() const;
};

/// theta with ||theta||^2 = lambda along the configured direction.
std::vector<double> theta_for(const ExperimentConfig& cfg, const ProblemDims& dims, double lambda);

struct FamilyConstants {
  ShrinkageConstants scalar;
  MatrixConstants matrix;
};

/// Constants for one (family, dims), seeded from cfg.seed.
FamilyConstants compute_constants(const ShrinkageFamily& fam, const ProblemDims& dims, const ExperimentConfig& cfg);

enum class LossKind { Mse, RiskReduction };
std::string_view to_string(LossKind loss);

struct RiskRow {
  int p = 0;
  int n = 0;
  std::string family;
  double lambda = 0.0;
  LossKind loss = LossKind::Mse;
  std::string estimator;
  double risk = 0.0;
  double std_error = 0.0;
  /// Paired difference risk(estimator) - risk(umvue) on the same draws.
  double diff_vs_umvue = 0.0;
  double diff_stderr = 0.0;
  /// The Monte Carlo target (trace of the target for matrix curves).
  double truth = 0.0;
};

struct RiskTable {
  std::vector<RiskRow> rows;
  CsvTable to_csv(std::string name) const;
};

/// Losses (R_hat - R)^2 and (R*_hat - R*)^2 on a paired design.
RiskTable run_mse_risk_curve(const ExperimentConfig& cfg);

/// Losses tr(M_hat - M)^2 and tr(M*_hat - M*)^2 on a paired design.
RiskTable run_matrix_risk_curve(const ExperimentConfig& cfg);

struct CoverageRow {
  int p = 0;
  int n = 0;
  std::string family;
  double lambda = 0.0;
  std::string variant;
  double coverage = 0.0;
  double std_error = 0.0;
  double mean_volume = 0.0;
  /// E[Vol] / E[Vol(C0)].
  double volume_ratio = 0.0;
};

struct CoverageTable {
  std::vector<CoverageRow> rows;
  CsvTable to_csv(std::string name) const;
};

CoverageTable run_coverage_curve(const ExperimentConfig& cfg, const std::vector<ConfidenceSpec>& variants);

/// Constants tables (gamma, W_pn, beta2, gamma^xi/eta, W^xi/eta) and per-j beta values.
std::vector<CsvTable> reproduce_tables(const ExperimentConfig& cfg);

struct UnbiasednessCheck {
  double mean_estimate = 0.0;
  double estimate_stderr = 0.0;
  double truth = 0.0;
  double truth_stderr = 0.0;
  /// (mean_estimate - truth) / combined stderr.
  double z() const;
};

/// Average of the UMVUE of the MSE over `reps` draws against true_risk at reps * 10.
UnbiasednessCheck umvue_unbiasedness(const ShrinkageFamily& fam, const ProblemDims& dims, double lambda,
                                     std::uint64_t reps, std::uint64_t seed, unsigned threads = 1);

/// Matplotlib script that plots the CSVs written next to it.
std::string plot_script();

}  // namespace stein
