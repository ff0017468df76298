#include "optsel/transforms.hpp"

#include <cmath>

namespace optsel {

double glm_weight(GlmFamily family, double eta) {
  switch (family) {
    case GlmFamily::Logistic: {
      // e^eta / (1 + e^eta)^2 is even in eta; evaluate on the decaying side.
      const double e = std::exp(-std::abs(eta));
      return std::sqrt(e) / (1.0 + e);
    }
    case GlmFamily::Poisson:
      return std::sqrt(std::exp(std::min(eta, kPoissonEtaCap)));
  }
  return 1.0;
}

DesignMatrix glm_transform(const DesignMatrix& x, const GlmSpec& spec) {
  if (spec.pilot_beta.size() != x.cols()) {
    throw Error(ErrorCode::InvalidArgument, "glm_transform: pilot_beta has wrong length");
  }
  if (!spec.pilot_beta.allFinite()) {
    throw Error(ErrorCode::NonFinite, "glm_transform: pilot_beta must be finite");
  }
  const Vector eta = x * spec.pilot_beta;
  DesignMatrix out = x;
  for (Index i = 0; i < x.rows(); ++i) out.row(i) *= glm_weight(spec.family, eta(i));
  return out;
}

DesignMatrix delta_transform(const DesignMatrix& x, const Matrix& g_gradient) {
  if (g_gradient.cols() != x.cols()) {
    throw Error(ErrorCode::InvalidArgument, "delta_transform: gradient must have p columns");
  }
  Matrix g = g_gradient.transpose() * g_gradient;
  SpdMatrix gm(0.5 * (g + g.transpose()));
  const Matrix l = gm.factor().matrixL();
  // X P^{-T} = (P^{-1} X^T)^T
  Matrix xt = x.transpose();
  l.triangularView<Eigen::Lower>().solveInPlace(xt);
  return xt.transpose();
}

DesignMatrix prediction_transform(const DesignMatrix& x, const Matrix& z) {
  if (z.cols() != x.cols() || z.rows() == 0) {
    throw Error(ErrorCode::InvalidArgument, "prediction_transform: Z must have p columns");
  }
  Matrix cov = z.transpose() * z / static_cast<double>(z.rows());
  SpdMatrix sz(0.5 * (cov + cov.transpose()));
  const Matrix root = inverse_sqrt(sz);
  return x * root;  // root is symmetric
}

double sampling_condition(const DesignMatrix& x, const Vector& pi) {
  SpdMatrix sigma(weighted_gram(x, pi));
  if (!sigma.positive_definite()) {
    throw Error(ErrorCode::SingularWeighting, "sampling_condition: Sigma is singular");
  }
  const Vector ev = symmetric_eigenvalues(sigma.entries());
  const double inv_norm = 1.0 / ev(0);
  const double kappa = ev(ev.size() - 1) / ev(0);
  const double row_max = x.cwiseAbs().rowwise().sum().maxCoeff();
  return inv_norm * kappa * row_max * row_max;
}

}  // namespace optsel
