#pragma once

#include <optional>

#include "optsel/errors.hpp"
#include "optsel/types.hpp"

namespace optsel {

/// Symmetric p x p matrix with a Cholesky factor computed at construction.
///
/// The matrix counts as positive definite when the factorization succeeds
/// and its smallest pivot (squared diagonal of L) exceeds
/// dim * machine-epsilon * max diagonal entry. Positive semidefinite input
/// is accepted; only operations that need the factor reject it.
class SpdMatrix {
 public:
  /// Throws InvalidArgument if `entries` is not square or not symmetric to
  /// 1e-12 relative tolerance. The stored matrix is exactly symmetrized.
  explicit SpdMatrix(Matrix entries);

  Index dim() const noexcept { return entries_.rows(); }
  const Matrix& entries() const noexcept { return entries_; }
  bool positive_definite() const noexcept { return factor_.has_value(); }

  /// Throws SingularMatrix if the matrix is not positive definite.
  const Eigen::LLT<Matrix>& factor() const;

  /// Dense inverse through the factor. Throws SingularMatrix.
  Matrix inverse() const;

 private:
  Matrix entries_;
  std::optional<Eigen::LLT<Matrix>> factor_;
};

bool is_symmetric(const Matrix& m, double rel_tol = 1e-12);

/// Sum of reciprocal eigenvalues, computed as ||L^{-1}||_F^2.
double trace_inverse(const SpdMatrix& m);

enum class RankOneSign { Add = +1, Remove = -1 };

/// Given inv = A^{-1}, returns (A + s u u^T)^{-1}. Throws DowndateSingular
/// if the denominator 1 + s u^T inv u is <= 1e-10.
Matrix sherman_morrison_update(const Matrix& inv, const Vector& u,
                               RankOneSign sign);

/// lambda_max / lambda_min from a symmetric eigendecomposition; +infinity
/// when lambda_min <= 0.
double condition_number(const SpdMatrix& m);

/// Ascending eigenvalues of a symmetric matrix.
Vector symmetric_eigenvalues(const Matrix& m);

/// Largest singular value.
double spectral_norm(const Matrix& m);

/// Inverse symmetric square root V diag(1/sqrt(l)) V^T. Throws
/// SingularMatrix unless positive definite.
Matrix inverse_sqrt(const SpdMatrix& m);

/// X^T diag(w) X.
Matrix weighted_gram(const DesignMatrix& x, const Vector& w);

/// X^T X.
Matrix gram(const DesignMatrix& x);

}  // namespace optsel
