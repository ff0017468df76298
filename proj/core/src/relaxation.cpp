#include "optsel/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace optsel {
namespace {

// Factor of X^T diag(pi) X, or SingularWeighting.
SpdMatrix weighted_factor(const Vector& pi, const DesignMatrix& x) {
  if (pi.size() != x.rows()) {
    throw Error(ErrorCode::InvalidArgument, "weights and design row count differ");
  }
  SpdMatrix sigma(weighted_gram(x, pi));
  if (!sigma.positive_definite()) {
    throw Error(ErrorCode::SingularWeighting,
                "weighted Gram matrix is not positive definite");
  }
  return sigma;
}

double safe_objective(const Vector& pi, const DesignMatrix& x) {
  try {
    return objective(pi, x);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SingularWeighting) {
      return std::numeric_limits<double>::infinity();
    }
    throw;
  }
}

}  // namespace

bool WeightVector::feasible(double sum_tol, double box_tol) const {
  if (values.size() == 0) return false;
  if (!values.allFinite() || values.minCoeff() < 0.0) return false;
  if (values.sum() > budget_k + sum_tol) return false;
  if (box_capped && values.maxCoeff() > 1.0 + box_tol) return false;
  return true;
}

void SolverConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "SolverConfig: alpha must lie in (0, 1/2]");
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "SolverConfig: beta must lie in (0, 1)");
  }
  if (max_iters <= 0) {
    throw Error(ErrorCode::InvalidArgument, "SolverConfig: max_iters must be positive");
  }
  if (!(rel_tol >= 0.0) || !(projection_rel_tol >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "SolverConfig: tolerances must be nonnegative");
  }
}

bool SolverTrace::monotone() const {
  for (std::size_t i = 1; i < iterations.size(); ++i) {
    if (iterations[i].objective > iterations[i - 1].objective) return false;
  }
  return true;
}

double objective(const Vector& pi, const DesignMatrix& x) {
  return trace_inverse(weighted_factor(pi, x));
}

double objective_and_gradient(const Vector& pi, const DesignMatrix& x, Vector& grad) {
  const SpdMatrix sigma = weighted_factor(pi, x);
  const auto& llt = sigma.factor();
  // Columns of W = Sigma^{-1} X^T; grad_i = -||W e_i||^2.
  const Matrix w = llt.solve(x.transpose());
  grad = -w.colwise().squaredNorm().transpose();
  return trace_inverse(sigma);
}

Vector gradient(const Vector& pi, const DesignMatrix& x) {
  Vector g;
  objective_and_gradient(pi, x, g);
  return g;
}

Matrix hessian(const Vector& pi, const DesignMatrix& x) {
  const SpdMatrix sigma = weighted_factor(pi, x);
  const Matrix w = sigma.factor().solve(x.transpose());  // Sigma^{-1} X^T
  const Matrix first = x * w;                             // X Sigma^{-1} X^T
  const Matrix second = w.transpose() * w;                // X Sigma^{-2} X^T
  Matrix h = 2.0 * second.cwiseProduct(first);
  return 0.5 * (h + h.transpose());
}

double support_threshold(double k, Index n) {
  return 1e-6 * k / static_cast<double>(n);
}

std::vector<Index> support(const WeightVector& pi, double threshold) {
  std::vector<Index> out;
  for (Index i = 0; i < pi.size(); ++i) {
    if (pi.values(i) > threshold) out.push_back(i);
  }
  return out;
}

std::vector<Index> support(const WeightVector& pi) {
  return support(pi, support_threshold(pi.budget_k, pi.size()));
}

RelaxationResult solve_relaxation(const DesignMatrix& x, int k, SamplingMode mode,
                                  const SolverConfig& cfg) {
  cfg.validate();
  const Index n = x.rows();
  const Index p = x.cols();
  if (n == 0 || p == 0) {
    throw Error(ErrorCode::InvalidArgument, "solve_relaxation: empty design");
  }
  if (k < p) {
    throw Error(ErrorCode::InvalidArgument,
                "solve_relaxation: budget k=" + std::to_string(k) +
                    " is smaller than p=" + std::to_string(p));
  }
  const bool box = mode == SamplingMode::WithoutReplacement;
  if (box && k > n) {
    throw Error(ErrorCode::InvalidArgument,
                "solve_relaxation: without replacement needs k <= n");
  }
  const double budget = static_cast<double>(k);
  const double cap = box ? 1.0 : kNoCap;

  RelaxationResult result;
  result.weights.budget_k = budget;
  result.weights.box_capped = box;

  Vector pi = Vector::Constant(n, budget / static_cast<double>(n));
  Vector grad;
  double f = objective_and_gradient(pi, x, grad);  // singular flat start propagates

  auto& trace = result.trace;
  trace.iterations.push_back({f, 0, 0.0, grad.norm()});
  trace.status = SolverStatus::MaxIters;

  double step = 1.0;
  if (cfg.adaptive_step) {
    const double gmax = grad.cwiseAbs().maxCoeff();
    step = gmax > 0.0 ? pi.maxCoeff() / gmax : 1.0;
  }

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    const double base = cfg.adaptive_step ? step : 1.0;
    Vector candidate;
    double f_candidate = std::numeric_limits<double>::infinity();
    int s = 0;
    double trial = base;
    bool accepted = false;
    for (; s < 200; ++s, trial *= cfg.beta) {
      const Vector moved = (pi - trial * grad).cwiseMax(0.0);
      const double delta = cfg.projection_rel_tol * std::max(moved.maxCoeff(), 1e-300);
      candidate = project_l1_linf(moved, budget, cap, delta);
      f_candidate = safe_objective(candidate, x);
      if (!std::isfinite(f_candidate)) continue;
      const double predicted = grad.dot(candidate - pi);
      if (f_candidate - f <= cfg.alpha * predicted && f_candidate <= f) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // No representable step decreases f: stationary to working precision.
      trace.status = SolverStatus::Converged;
      break;
    }

    const double decrease = f - f_candidate;
    pi = std::move(candidate);
    f = objective_and_gradient(pi, x, grad);
    trace.iterations.push_back({f, s, trial, grad.norm()});
    step = trial / cfg.beta;

    if (decrease <= cfg.rel_tol * std::abs(f)) {
      trace.status = SolverStatus::Converged;
      break;
    }
  }

  result.weights.values = std::move(pi);
  result.objective = f;
  return result;
}

double minimax_certificate(const DesignMatrix& x, int k, SamplingMode mode,
                           const SolverConfig& cfg) {
  return solve_relaxation(x, k, mode, cfg).objective;
}

}  // namespace optsel
