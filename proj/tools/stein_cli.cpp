// stein: shrinkage estimation, MSE estimation and Monte Carlo experiments.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "stein/confidence.hpp"
#include "stein/csv.hpp"
#include "stein/errors.hpp"
#include "stein/experiments.hpp"
#include "stein/parallel.hpp"
#include "stein/umvue.hpp"

using json = nlohmann::ordered_json;
using namespace stein;

namespace {

// Usage problems detected after parsing; mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<ProblemDims> parse_dims(const std::string& s) {
  std::vector<ProblemDims> out;
  for (const auto& item : split_list(s)) {
    const auto x = item.find('x');
    if (x == std::string::npos) throw UsageError("--dims entries look like 5x5, got '" + item + "'");
    try {
      out.emplace_back(std::stoi(item.substr(0, x)), std::stoi(item.substr(x + 1)));
    } catch (const std::invalid_argument&) {
      throw UsageError("--dims entries look like 5x5, got '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("--dims is empty");
  return out;
}

std::vector<FamilyKind> parse_families(const std::string& s) {
  std::vector<FamilyKind> out;
  for (const auto& item : split_list(s)) {
    const auto f = parse_family(item);
    if (!f) throw UsageError("unknown family '" + item + "' (use js or js-plus)");
    out.push_back(*f);
  }
  return out;
}

// "0:30:1" or "0,5,10".
std::vector<double> parse_lambda(const std::string& s) {
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    double a = 0, b = 0, step = 0;
    if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &a, &b, &step) != 3 || !(step > 0.0) || b < a)
      throw UsageError("--lambda range looks like start:stop:step");
    const long count = std::lround(std::floor((b - a) / step + 1e-9));
    for (long i = 0; i <= count; ++i) out.push_back(a + double(i) * step);
  } else {
    for (const auto& item : split_list(s)) out.push_back(std::stod(item));
  }
  return out;
}

ConstantsMethod parse_method(const std::string& s) {
  if (s == "mc" || s == "monte-carlo") return ConstantsMethod::MonteCarlo;
  if (s == "quadrature") return ConstantsMethod::Quadrature;
  throw UsageError("--constants-method is mc or quadrature");
}

unsigned thread_count(unsigned flag) { return resolve_threads(flag ? flag : threads_from_env()); }

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw InputError("cannot write " + out);
  f << text;
}

void emit_tables(const std::vector<CsvTable>& tables, const std::string& out) {
  if (out.empty() || out == "-") {
    for (const auto& t : tables) std::cout << "# " << t.name << ".csv\n" << t.to_string() << "\n";
    return;
  }
  std::filesystem::create_directories(out);
  for (const auto& t : tables) t.write(std::filesystem::path(out) / (t.name + ".csv"));
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json matrix_json(const AxialMatrix& m) {
  return {{"scale", m.scale()},
          {"iso", m.iso()},
          {"axial", m.axial()},
          {"axis", std::vector<double>(m.axis().begin(), m.axis().end())},
          {"eigenvalues", {{"along_axis", m.eigenvalue_along()}, {"across_axis", m.eigenvalue_across()}}},
          {"trace", m.trace()},
          {"positive_definite", m.positive_definite()}};
}

struct EstimateArgs {
  std::optional<int> p, n;
  std::string x_path, input_path, theta_path, family = "js-plus", mse = "psi0", matrix = "xi2tr-eta2";
  std::vector<std::string> confidence;
  std::optional<double> s;
  std::optional<std::uint64_t> seed;
  double level = 0.95;
  std::string method = "quadrature";
  std::uint64_t constants_reps = 1000000;
  int j_max = 50;
};

int run_estimate(const EstimateArgs& a, unsigned threads, const std::string& out) {
  std::vector<double> x;
  double s = 0;
  int p = 0, n = 0;
  if (!a.input_path.empty()) {
    std::ifstream f(a.input_path);
    if (!f) throw InputError("cannot open " + a.input_path);
    json j;
    try {
      j = json::parse(f);
      p = j.at("p").get<int>();
      n = j.at("n").get<int>();
      x = j.at("x").get<std::vector<double>>();
      s = j.at("s").get<double>();
    } catch (const json::exception& e) {
      throw InputError(a.input_path + ": " + e.what());
    }
  } else {
    if (!a.p || !a.n || a.x_path.empty() || !a.s) throw UsageError("estimate needs --p, --n, --x and --s (or --input)");
    p = *a.p;
    n = *a.n;
    s = *a.s;
  }
  const ProblemDims dims(p, n);
  if (a.input_path.empty()) x = read_vector_csv(a.x_path);
  if (x.size() != std::size_t(p)) throw InputError("x has " + std::to_string(x.size()) + " values, p = " + std::to_string(p));
  const Observation obs(x, s);

  const auto fk = parse_family(a.family);
  if (!fk) throw UsageError("unknown family '" + a.family + "' (use js or js-plus)");
  const ShrinkageFamily fam = make_family(*fk, dims);
  const auto mse_kind = parse_mse_kind(a.mse);
  if (!mse_kind) throw UsageError("unknown --mse '" + a.mse + "'");
  const auto matrix_kind = parse_matrix_kind(a.matrix);
  if (!matrix_kind) throw UsageError("unknown --matrix '" + a.matrix + "'");
  std::vector<ConfidenceVariant> variants;
  for (const auto& c : a.confidence) {
    const auto v = parse_confidence_variant(c);
    if (!v) throw UsageError("unknown --confidence '" + c + "'");
    variants.push_back(*v);
  }
  const ConstantsMethod method = parse_method(a.method);
  if (method == ConstantsMethod::MonteCarlo && !a.seed) throw UsageError("--constants-method mc needs --seed");

  ExperimentConfig cfg;
  cfg.dims_list = {dims};
  cfg.seed = a.seed.value_or(0);
  cfg.constants_method = method;
  cfg.constants_reps = a.constants_reps;
  cfg.j_max = a.j_max;
  cfg.threads = threads;
  const FamilyConstants consts = compute_constants(fam, dims, cfg);

  const auto est = apply_estimator(obs, fam, dims);
  const AxialMatrix m = estimate_mse_matrix(*matrix_kind, obs, fam, dims, &consts.matrix);

  json j;
  j["schema"] = 1;
  j["command"] = "estimate";
  j["parameters"] = {{"p", p},
                     {"n", n},
                     {"s", s},
                     {"x", x},
                     {"family", a.family},
                     {"mse", a.mse},
                     {"matrix", a.matrix},
                     {"confidence", a.confidence},
                     {"level", a.level},
                     {"constants_method", std::string(to_string(method))},
                     {"constants_reps", a.constants_reps},
                     {"j_max", a.j_max},
                     {"seed", a.seed ? json(*a.seed) : json(nullptr)}};
  j["w"] = obs.w();
  j["estimate"] = est.value;
  j["shrunk_to_origin"] = est.shrunk_to_origin;
  j["mse"] = {{"kind", std::string(to_string(*mse_kind))},
              {"value", estimate_mse(*mse_kind, obs, fam, dims, &consts.scalar)},
              {"umvue", umvue_mse(obs, fam, dims)}};
  j["matrix"] = matrix_json(m);
  j["matrix"]["kind"] = std::string(to_string(*matrix_kind));
  const auto& b = consts.matrix.beta;
  j["constants"] = {{"alpha", consts.scalar.alpha},
                    {"alpha_stderr", consts.scalar.alpha_stderr},
                    {"alpha_method", std::string(to_string(consts.scalar.provenance.method))},
                    {"w_pn", consts.scalar.w_pn},
                    {"gamma", consts.scalar.gamma},
                    {"beta1", b.beta1},
                    {"beta2", b.beta2},
                    {"beta2_stderr", b.beta2_stderr},
                    {"w_xi", optional_json(consts.matrix.roots.w_xi)},
                    {"w_eta", optional_json(consts.matrix.roots.w_eta)},
                    {"gamma_xi", optional_json(consts.matrix.gammas.gamma_xi)},
                    {"gamma_eta", optional_json(consts.matrix.gammas.gamma_eta)},
                    {"xi1_eta1_certified", consts.matrix.xi1_eta1_certified},
                    {"xi2_eta2_certified", consts.matrix.xi2_eta2_certified}};

  std::optional<std::vector<double>> theta;
  if (!a.theta_path.empty()) {
    theta = read_vector_csv(a.theta_path);
    if (theta->size() != std::size_t(p)) throw InputError("theta length differs from p");
  }
  json sets = json::array();
  for (auto v : variants) {
    ConfidenceSpec spec{v, a.level, std::nullopt};
    const auto res = theta ? build_confidence_set(spec, obs, fam, dims, &consts.matrix, std::span<const double>(*theta))
                           : build_confidence_set(spec, obs, fam, dims, &consts.matrix);
    json cs = {{"variant", std::string(to_string(v))},
               {"center", res.center},
               {"quadratic_radius", res.quadratic_radius},
               {"volume", res.volume},
               {"shape", matrix_json(res.shape)}};
    if (res.contains_truth) {
      cs["contains_theta"] = *res.contains_truth;
      cs["quadratic_form"] = *res.quadratic_form;
    }
    sets.push_back(cs);
  }
  if (!variants.empty()) j["confidence"] = sets;
  emit(j.dump(2) + "\n", out);
  return 0;
}

int run_canonicalize(const std::string& design_path, const std::string& response_path, const std::string& out) {
  const auto rows = read_matrix_csv(design_path);
  const auto y = read_vector_csv(response_path);
  if (rows.size() != y.size()) throw InputError("design has " + std::to_string(rows.size()) + " rows, response has " +
                                                std::to_string(y.size()));
  Eigen::MatrixXd a(Eigen::Index(rows.size()), Eigen::Index(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[i].size(); ++k) a(Eigen::Index(i), Eigen::Index(k)) = rows[i][k];
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), Eigen::Index(y.size()));
  const CanonicalForm c = canonicalize_regression(a, yv);
  std::vector<std::vector<double>> basis;
  for (Eigen::Index i = 0; i < c.basis.rows(); ++i) {
    basis.emplace_back();
    for (Eigen::Index k = 0; k < c.basis.cols(); ++k) basis.back().push_back(c.basis(i, k));
  }
  json j;
  j["schema"] = 1;
  j["command"] = "canonicalize";
  j["parameters"] = {{"design", design_path}, {"response", response_path}};
  j["p"] = c.dims.p();
  j["n"] = c.dims.n();
  j["x"] = std::vector<double>(c.obs.x().begin(), c.obs.x().end());
  j["s"] = c.obs.s();
  j["basis"] = basis;
  emit(j.dump(2) + "\n", out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shrinkage estimators of a normal mean and estimators of their MSE"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 0;
  std::string out;
  app.add_option("--threads", threads, "Worker threads (default: STEIN_PRECISION_THREADS or all cores)");

  // estimate
  EstimateArgs ea;
  auto* est = app.add_subcommand("estimate", "Point estimate, MSE, MSE matrix and confidence sets for one observation");
  est->add_option("--p", ea.p, "Dimension of X");
  est->add_option("--n", ea.n, "Degrees of freedom of S");
  est->add_option("--x", ea.x_path, "Single-column CSV with X");
  est->add_option("--s", ea.s, "Residual sum of squares S");
  est->add_option("--input", ea.input_path, "JSON from `canonicalize` (replaces --p/--n/--x/--s)");
  est->add_option("--family", ea.family, "js or js-plus")->capture_default_str();
  est->add_option("--mse", ea.mse, "umvue, truncated-zero, psi0, psi1, psi2, psi1-tr, psi2-tr")->capture_default_str();
  est->add_option("--matrix", ea.matrix, "umvue, xi0, xi1, xi2, xi1-tr, xi2-tr")->capture_default_str();
  est->add_option("--confidence", ea.confidence, "c0, c1, c2, c3, c1-star, c2-star (repeatable)")->delimiter(',');
  est->add_option("--level", ea.level, "Confidence level")->capture_default_str();
  est->add_option("--theta", ea.theta_path, "Single-column CSV with a mean to test for membership");
  est->add_option("--constants-method", ea.method, "quadrature or mc")->capture_default_str();
  est->add_option("--constants-reps", ea.constants_reps, "Replications for mc constants")->capture_default_str();
  est->add_option("--j-max", ea.j_max, "Largest j for the beta constants")->capture_default_str();
  est->add_option("--seed", ea.seed, "Seed (required with --constants-method mc)");
  est->add_option("--out", out, "Output file (default stdout)");

  // constants
  std::string dims_s = "5x5,10x5,5x10,10x10", fam_s = "js,js-plus", method_s = "mc", plot_dir;
  std::uint64_t reps = 1000000;
  std::optional<std::uint64_t> seed;
  int j_max = 50;
  auto* cons = app.add_subcommand("constants", "Regenerate the constants tables as CSV");
  cons->add_option("--dims", dims_s, "Comma-separated pxn pairs")->capture_default_str();
  cons->add_option("--families", fam_s, "Comma-separated families")->capture_default_str();
  cons->add_option("--reps", reps, "Monte Carlo replications")->capture_default_str();
  cons->add_option("--seed", seed, "Seed (required for mc)");
  cons->add_option("--method", method_s, "mc or quadrature")->capture_default_str();
  cons->add_option("--j-max", j_max, "Largest j for the beta constants")->capture_default_str();
  cons->add_option("--out", out, "Output directory (default stdout)");

  // risk-curve
  std::string type = "mse", lambda_s = "0:30:1", kinds_s, direction = "equal", cmethod = "mc";
  std::uint64_t truth_mult = 10, creps = 1000000, exp_reps = 100000;
  std::string exp_dims = "5x5", exp_fam = "js-plus";
  auto* risk = app.add_subcommand("risk-curve", "Monte Carlo risks of the MSE estimators over a lambda grid");
  risk->add_option("--type", type, "mse or matrix")->capture_default_str();
  risk->add_option("--dims", exp_dims, "Comma-separated pxn pairs")->capture_default_str();
  risk->add_option("--families", exp_fam, "Comma-separated families")->capture_default_str();
  risk->add_option("--lambda", lambda_s, "start:stop:step or a comma list")->capture_default_str();
  risk->add_option("--reps", exp_reps, "Replications per grid point")->capture_default_str();
  risk->add_option("--seed", seed, "Seed (required)");
  risk->add_option("--kinds", kinds_s, "Comma-separated estimator kinds (default all)");
  risk->add_option("--theta-direction", direction, "equal or first-axis")->capture_default_str();
  risk->add_option("--truth-multiplier", truth_mult, "True risks use reps times this")->capture_default_str();
  risk->add_option("--constants-method", cmethod, "mc or quadrature")->capture_default_str();
  risk->add_option("--constants-reps", creps, "Replications for mc constants")->capture_default_str();
  risk->add_option("--j-max", j_max, "Largest j for the beta constants");
  risk->add_option("--out", out, "Output CSV (default stdout)");

  // coverage
  std::string variants_s = "c0,c1,c2,c3,c1-star,c2-star";
  double level = 0.95;
  auto* cov = app.add_subcommand("coverage", "Coverage and volume of the confidence sets over a lambda grid");
  cov->add_option("--dims", exp_dims, "Comma-separated pxn pairs");
  cov->add_option("--families", exp_fam, "Comma-separated families");
  cov->add_option("--lambda", lambda_s, "start:stop:step or a comma list");
  cov->add_option("--reps", exp_reps, "Replications per grid point");
  cov->add_option("--seed", seed, "Seed (required)");
  cov->add_option("--variants", variants_s, "Comma-separated variants")->capture_default_str();
  cov->add_option("--level", level, "Confidence level")->capture_default_str();
  cov->add_option("--theta-direction", direction, "equal or first-axis");
  cov->add_option("--constants-method", cmethod, "mc or quadrature");
  cov->add_option("--constants-reps", creps, "Replications for mc constants");
  cov->add_option("--j-max", j_max, "Largest j for the beta constants");
  cov->add_option("--out", out, "Output CSV (default stdout)");

  // canonicalize
  std::string design_path, response_path;
  auto* can = app.add_subcommand("canonicalize", "Map a regression (A, Y) to canonical (X, S, n)");
  can->add_option("--design", design_path, "CSV design matrix A (N x p)")->required();
  can->add_option("--response", response_path, "Single-column CSV response Y")->required();
  can->add_option("--out", out, "Output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const unsigned nthreads = thread_count(threads);
    if (est->parsed()) return run_estimate(ea, nthreads, out);
    if (can->parsed()) return run_canonicalize(design_path, response_path, out);

    ExperimentConfig cfg;
    cfg.dims_list = parse_dims(cons->parsed() ? dims_s : exp_dims);
    cfg.families = parse_families(cons->parsed() ? fam_s : exp_fam);
    cfg.threads = nthreads;
    cfg.j_max = j_max;

    if (cons->parsed()) {
      cfg.constants_method = parse_method(method_s);
      if (cfg.constants_method == ConstantsMethod::MonteCarlo && !seed) throw UsageError("constants --method mc needs --seed");
      cfg.seed = seed.value_or(0);
      cfg.constants_reps = reps;
      auto tables = reproduce_tables(cfg);
      emit_tables(tables, out);
      if (!out.empty() && out != "-") emit(plot_script(), (std::filesystem::path(out) / "plot.py").string());
      return 0;
    }

    if (!seed) throw UsageError("--seed is required for stochastic subcommands");
    cfg.seed = *seed;
    cfg.reps = exp_reps;
    cfg.lambda_grid = parse_lambda(lambda_s);
    cfg.truth_multiplier = truth_mult;
    cfg.constants_method = parse_method(cmethod);
    cfg.constants_reps = creps;
    if (direction == "equal") cfg.theta_direction = ThetaDirection::EqualCoordinates;
    else if (direction == "first-axis") cfg.theta_direction = ThetaDirection::FirstAxis;
    else throw UsageError("--theta-direction is equal or first-axis");

    if (risk->parsed()) {
      if (type == "mse") {
        if (!kinds_s.empty()) {
          cfg.mse_kinds.clear();
          for (const auto& k : split_list(kinds_s)) {
            const auto v = parse_mse_kind(k);
            if (!v) throw UsageError("unknown MSE estimator '" + k + "'");
            cfg.mse_kinds.push_back(*v);
          }
        }
        emit(run_mse_risk_curve(cfg).to_csv("mse_risk").to_string(), out);
      } else if (type == "matrix") {
        if (!kinds_s.empty()) {
          cfg.matrix_kinds.clear();
          for (const auto& k : split_list(kinds_s)) {
            const auto v = parse_matrix_kind(k);
            if (!v) throw UsageError("unknown matrix estimator '" + k + "'");
            cfg.matrix_kinds.push_back(*v);
          }
        }
        emit(run_matrix_risk_curve(cfg).to_csv("matrix_risk").to_string(), out);
      } else {
        throw UsageError("--type is mse or matrix");
      }
      return 0;
    }

    if (cov->parsed()) {
      std::vector<ConfidenceSpec> specs;
      for (const auto& v : split_list(variants_s)) {
        const auto parsed = parse_confidence_variant(v);
        if (!parsed) throw UsageError("unknown confidence variant '" + v + "'");
        specs.push_back({*parsed, level, std::nullopt});
      }
      emit(run_coverage_curve(cfg, specs).to_csv("coverage").to_string(), out);
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const MissingConstants& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: malformed number: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
