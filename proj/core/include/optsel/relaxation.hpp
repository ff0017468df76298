#pragma once

#include <limits>
#include <vector>

#include "optsel/linalg.hpp"
#include "optsel/types.hpp"

namespace optsel {

/// Relaxed selection weights pi. Feasible when pi >= 0, sum(pi) <= k and,
/// in without-replacement mode, pi <= 1.
struct WeightVector {
  Vector values;
  double budget_k = 0.0;
  bool box_capped = false;

  Index size() const noexcept { return values.size(); }
  bool feasible(double sum_tol = 1e-9, double box_tol = 1e-12) const;
};

struct SolverConfig {
  double alpha = 0.3;          // sufficient-decrease constant, (0, 1/2]
  double beta = 0.5;           // step shrink factor, (0, 1)
  int max_iters = 500;
  double rel_tol = 1e-8;       // stop on relative objective decrease
  double projection_rel_tol = 1e-10;  // bisection tolerance, times max(pi)
  /// Scale the first trial step to the problem and let it grow by 1/beta
  /// after each accepted iteration. With false every iteration starts from
  /// a unit step, i.e. the plain beta^s schedule.
  bool adaptive_step = true;

  /// Throws InvalidArgument on out-of-range parameters.
  void validate() const;
};

enum class SolverStatus { Converged, MaxIters };

struct TraceEntry {
  double objective = 0.0;
  int step_exponent = 0;   // backtracks taken in this iteration
  double step = 0.0;       // accepted step length
  double gradient_norm = 0.0;
};

struct SolverTrace {
  std::vector<TraceEntry> iterations;
  SolverStatus status = SolverStatus::MaxIters;

  bool monotone() const;
};

struct RelaxationResult {
  WeightVector weights;
  SolverTrace trace;
  double objective = 0.0;
};

/// tr[(X^T diag(pi) X)^{-1}]. Throws SingularWeighting when the weighted
/// Gram matrix is not positive definite.
double objective(const Vector& pi, const DesignMatrix& x);
inline double objective(const WeightVector& pi, const DesignMatrix& x) {
  return objective(pi.values, x);
}

/// d f / d pi_i = -x_i^T Sigma^{-2} x_i, Sigma = X^T diag(pi) X.
Vector gradient(const Vector& pi, const DesignMatrix& x);
inline Vector gradient(const WeightVector& pi, const DesignMatrix& x) {
  return gradient(pi.values, x);
}

/// Objective and gradient sharing one factorization.
double objective_and_gradient(const Vector& pi, const DesignMatrix& x, Vector& grad);

/// n x n Hessian 2 (X Sigma^{-2} X^T) o (X Sigma^{-1} X^T). Dense; meant for
/// diagnostics on small pools.
Matrix hessian(const Vector& pi, const DesignMatrix& x);
inline Matrix hessian(const WeightVector& pi, const DesignMatrix& x) {
  return hessian(pi.values, x);
}

inline constexpr double kNoCap = std::numeric_limits<double>::infinity();

/// Euclidean projection of a nonnegative point onto
/// {x >= 0, ||x||_1 <= c1, ||x||_inf <= c2}. Pass c2 = kNoCap to drop the box.
/// The l1 multiplier is located by bisection to |h| <= delta, then refined
/// with one secant step on the final linear piece.
Vector project_l1_linf(const Vector& point, double c1, double c2, double delta);

/// Projected gradient descent from the flat start pi_i = k/n.
RelaxationResult solve_relaxation(const DesignMatrix& x, int k, SamplingMode mode,
                                  const SolverConfig& cfg = {});

/// f_b^*(k; X), the relaxation optimum. Every selection of at most k rows
/// has F(S; X) >= this value.
double minimax_certificate(const DesignMatrix& x, int k, SamplingMode mode,
                           const SolverConfig& cfg = {});

/// Entries counted as nonzero: 1e-6 * k / n.
double support_threshold(double k, Index n);

/// Indices with pi_i > threshold, ascending.
std::vector<Index> support(const WeightVector& pi, double threshold);
std::vector<Index> support(const WeightVector& pi);

}  // namespace optsel
