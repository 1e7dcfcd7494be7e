#pragma once

// Improved estimators of the MSE matrix M(delta) = E(delta - theta)(delta - theta)'.
//
// Every estimator here has the form
//   S [ (1/n - g1 xi) I + (g3 - g1 (eta - xi)) u u' ],
// i.e. eigenvalue S(1/n - g1 eta + g3) along u = X/||X|| and S(1/n - g1 xi)
// across it.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "stein/axial_matrix.hpp"
#include "stein/mse_improved.hpp"
#include "stein/problem.hpp"
#include "stein/random.hpp"
#include "stein/shrinkage.hpp"

namespace stein {

enum class MatrixEstimatorKind { Umvue, Xi0Eta0, Xi1Eta1, Xi2Eta2, Xi1TREta1, Xi2TREta2 };

inline constexpr MatrixEstimatorKind kAllMatrixKinds[] = {
    MatrixEstimatorKind::Umvue,   MatrixEstimatorKind::Xi0Eta0,   MatrixEstimatorKind::Xi1Eta1,
    MatrixEstimatorKind::Xi2Eta2, MatrixEstimatorKind::Xi1TREta1, MatrixEstimatorKind::Xi2TREta2};

std::string_view to_string(MatrixEstimatorKind kind);
/// Accepts the canonical names plus the short forms xi0, xi1, xi2, xi1-tr, xi2-tr.
std::optional<MatrixEstimatorKind> parse_matrix_kind(std::string_view name);

/// b(W) = 4phi/W + (n+2)phi^2/W - 4phi' - 4 phi phi'.
double b_of_w(const ShrinkageFamily& fam, const ProblemDims& dims, double w);

struct BetaJ {
  int j = 0;
  double value = 0.0;
  double std_error = 0.0;
};

/// beta^(1)(j) = E[2(p-1)phi(W)/W - (p+2j-1) b(W)/(p+2j)] and
/// beta^(2)(j) = E[2phi(W)/W - b(W)/(p+2j)], with W = u/v,
/// u ~ chi^2_{p+2j}, v ~ chi^2_n.
double beta_integrand(int order, const ShrinkageFamily& fam, const ProblemDims& dims, int j, double w);

/// Monte Carlo. Both orders for a given j share draws; the stream for j is
/// derive_seed(rng.seed, {rng.stream_id, j}) and replication r reads
/// stream r of it.
BetaJ beta_j(int order, const ShrinkageFamily& fam, const ProblemDims& dims, int j, std::uint64_t reps,
             const RngStream& rng, unsigned threads = 1);

BetaJ beta_j_quadrature(int order, const ShrinkageFamily& fam, const ProblemDims& dims, int j);

struct BetaConstants {
  double beta1 = 0.0;  // min over evaluated j
  double beta2 = 0.0;  // max over evaluated j
  int beta1_j = 0;
  int beta2_j = 0;
  double beta1_stderr = 0.0;
  double beta2_stderr = 0.0;
  int j_max = 0;
  std::vector<BetaJ> per_j1;
  std::vector<BetaJ> per_j2;
  Provenance provenance;
  /// An extremum was attained at j >= j_max.
  bool boundary_warning = false;
};

/// Evaluates j = 0..j_max and the tail checks 2 j_max, 4 j_max. j_max >= 10.
BetaConstants beta_constants(const ShrinkageFamily& fam, const ProblemDims& dims, int j_max, std::uint64_t reps,
                             const RngStream& rng, unsigned threads = 1);
BetaConstants beta_constants_quadrature(const ShrinkageFamily& fam, const ProblemDims& dims, int j_max,
                                        unsigned threads = 1);

/// Roots of (1+W) beta2 / ((n+p+2) g1(W)) = 1 and
/// (g3(W) + (1+W) beta2/(n+p+2)) / g1(W) = 1. An absent root means the left
/// side never drops below one, so the corresponding xi1 / eta1 is identically 1.
struct XiEtaRoots {
  std::optional<double> w_xi;
  std::optional<double> w_eta;
};
XiEtaRoots solve_w_xi_eta(const ShrinkageFamily& fam, const ProblemDims& dims, double beta2);

/// gamma = n(1+W)beta2/(n+p+2) for each available root.
struct XiEtaGammas {
  std::optional<double> gamma_xi;
  std::optional<double> gamma_eta;
};
XiEtaGammas gamma_xi_eta(const ProblemDims& dims, const XiEtaRoots& roots, double beta2);

/// Denominators n + p + offset in the lower caps of xi0 and of the TR rules.
struct MatrixOptions {
  int xi0_offset = 1;
  int tr_offset = 1;
};

struct MatrixConstants {
  BetaConstants beta;
  XiEtaRoots roots;
  XiEtaGammas gammas;
  MatrixOptions options;
  /// gamma^xi < 1 and gamma^eta < 1 (absent roots count as certified).
  bool xi1_eta1_certified = false;
  /// beta2/(n+2) < 1/n.
  bool xi2_eta2_certified = false;
};

MatrixConstants matrix_constants(const ShrinkageFamily& fam, const ProblemDims& dims, BetaConstants beta,
                                 MatrixOptions options = {});

struct XiEta {
  double xi = 1.0;
  double eta = 1.0;
};

/// The (xi, eta) pair of `kind` at W; Xi1/Xi2 kinds need `consts`.
XiEta xi_eta(MatrixEstimatorKind kind, const ShrinkageFamily& fam, const ProblemDims& dims, double w,
             const MatrixConstants* consts = nullptr);

AxialMatrix estimate_mse_matrix(MatrixEstimatorKind kind, const Observation& obs, const ShrinkageFamily& fam,
                                const ProblemDims& dims, const MatrixConstants* consts = nullptr);

/// (S/n) I - estimate_mse_matrix(...).
AxialMatrix estimate_risk_reduction_matrix(MatrixEstimatorKind kind, const Observation& obs,
                                           const ShrinkageFamily& fam, const ProblemDims& dims,
                                           const MatrixConstants* consts = nullptr);

}  // namespace stein
