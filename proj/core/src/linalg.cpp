#include "optsel/linalg.hpp"

#include <cmath>
#include <limits>

namespace optsel {

bool is_symmetric(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

SpdMatrix::SpdMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw Error(ErrorCode::InvalidArgument, "SpdMatrix: matrix must be square and non-empty");
  }
  if (!entries_.allFinite()) {
    throw Error(ErrorCode::NonFinite, "SpdMatrix: non-finite entry");
  }
  if (!is_symmetric(entries_)) {
    throw Error(ErrorCode::InvalidArgument, "SpdMatrix: matrix is not symmetric");
  }
  entries_ = 0.5 * (entries_ + entries_.transpose()).eval();

  Eigen::LLT<Matrix> llt(entries_);
  if (llt.info() != Eigen::Success) return;
  const double max_diag = entries_.diagonal().maxCoeff();
  const double threshold = static_cast<double>(dim()) *
                           std::numeric_limits<double>::epsilon() * max_diag;
  const Matrix& l = llt.matrixLLT();
  for (Index j = 0; j < dim(); ++j) {
    const double pivot = l(j, j) * l(j, j);
    if (!(pivot > threshold)) return;
  }
  factor_ = std::move(llt);
}

const Eigen::LLT<Matrix>& SpdMatrix::factor() const {
  if (!factor_) {
    throw Error(ErrorCode::SingularMatrix, "matrix is not numerically positive definite");
  }
  return *factor_;
}

Matrix SpdMatrix::inverse() const {
  return factor().solve(Matrix::Identity(dim(), dim()));
}

double trace_inverse(const SpdMatrix& m) {
  // tr(A^{-1}) = tr(L^{-T} L^{-1}) = ||L^{-1}||_F^2
  Matrix linv = Matrix::Identity(m.dim(), m.dim());
  m.factor().matrixL().solveInPlace(linv);
  return linv.squaredNorm();
}

Matrix sherman_morrison_update(const Matrix& inv, const Vector& u, RankOneSign sign) {
  if (inv.rows() != inv.cols() || inv.rows() != u.size()) {
    throw Error(ErrorCode::InvalidArgument, "sherman_morrison_update: dimension mismatch");
  }
  const double s = sign == RankOneSign::Add ? 1.0 : -1.0;
  const Vector iu = inv * u;
  const double denom = 1.0 + s * u.dot(iu);
  if (denom <= 1e-10) {
    throw Error(ErrorCode::DowndateSingular, "rank-one update would make the matrix singular");
  }
  Matrix out = inv - (s / denom) * iu * iu.transpose();
  return 0.5 * (out + out.transpose());
}

Vector symmetric_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double condition_number(const SpdMatrix& m) {
  const Vector ev = symmetric_eigenvalues(m.entries());
  const double lo = ev(0);
  const double hi = ev(ev.size() - 1);
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

Matrix inverse_sqrt(const SpdMatrix& m) {
  m.factor();  // rejects non-PD input
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.entries());
  const Vector d = es.eigenvalues().cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

Matrix weighted_gram(const DesignMatrix& x, const Vector& w) {
  Matrix g = x.transpose() * w.asDiagonal() * x;
  return 0.5 * (g + g.transpose());
}

Matrix gram(const DesignMatrix& x) {
  Matrix g = x.transpose() * x;
  return 0.5 * (g + g.transpose());
}

}  // namespace optsel
