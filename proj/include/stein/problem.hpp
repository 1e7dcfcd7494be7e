#pragma once

#include <span>
#include <vector>

namespace stein {

/// Mean dimension p (>= 3) and residual degrees of freedom n (>= 1).
class ProblemDims {
 public:
  /// Throws DomainError unless p >= 3 and n >= 1.
  ProblemDims(int p, int n);

  int p() const { return p_; }
  int n() const { return n_; }

  /// (p - 2) / (n + 2), the James-Stein shrinkage constant.
  double js_constant() const { return double(p_ - 2) / double(n_ + 2); }

  friend bool operator==(const ProblemDims&, const ProblemDims&) = default;

 private:
  int p_;
  int n_;
};

/// X ~ N_p(theta, sigma^2 I) together with S ~ sigma^2 chi^2_n.
class Observation {
 public:
  /// Throws DomainError if s <= 0 or x is empty.
  Observation(std::vector<double> x, double s);

  std::span<const double> x() const { return x_; }
  double s() const { return s_; }
  double norm2() const { return norm2_; }
  /// W = ||X||^2 / S.
  double w() const { return norm2_ / s_; }
  std::size_t size() const { return x_.size(); }

 private:
  std::vector<double> x_;
  double s_;
  double norm2_;
};

}  // namespace stein
