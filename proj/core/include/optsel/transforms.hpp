#pragma once

#include "optsel/linalg.hpp"
#include "optsel/types.hpp"

namespace optsel {

// Design transforms that turn GLM, delta-method and prediction objectives
// into the plain A-optimality problem. Selectors then run unchanged on the
// transformed pool.

enum class GlmFamily { Logistic, Poisson };

struct GlmSpec {
  GlmFamily family = GlmFamily::Logistic;
  Vector pilot_beta;  // consistent pilot estimate of the coefficients
};

/// Poisson information weights exp(eta) are capped at exp(50).
inline constexpr double kPoissonEtaCap = 50.0;

/// Row i scaled by sqrt of the Fisher information at eta_i = x_i^T beta.
DesignMatrix glm_transform(const DesignMatrix& x, const GlmSpec& spec);

/// The square-root information weight for a single linear predictor value.
double glm_weight(GlmFamily family, double eta);

/// X P^{-T} with G = J^T J = P P^T (Cholesky), so that
/// tr[G (X^T X)^{-1}] = tr[(X~^T X~)^{-1}]. Throws SingularMatrix.
DesignMatrix delta_transform(const DesignMatrix& x, const Matrix& g_gradient);

/// Rows mapped through (Z^T Z / m)^{-1/2}. Throws SingularMatrix.
DesignMatrix prediction_transform(const DesignMatrix& x, const Matrix& z);

/// ||Sigma^{-1}||_2 kappa(Sigma) ||X||_inf^2 with Sigma = X^T diag(pi) X and
/// ||X||_inf the largest absolute row sum. Scale invariant in X.
double sampling_condition(const DesignMatrix& x, const Vector& pi);

}  // namespace optsel
