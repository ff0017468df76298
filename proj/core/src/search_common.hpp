#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "optsel/linalg.hpp"
#include "optsel/selectors.hpp"

namespace optsel::detail {

// Rank-one updated inverses are rebuilt from scratch this often to bound
// accumulated roundoff.
inline constexpr int kRefactorEvery = 32;
inline constexpr double kPivotFloor = 1e-10;

inline Matrix rows_gram(const DesignMatrix& x, const std::vector<Index>& rows) {
  Matrix g = Matrix::Zero(x.cols(), x.cols());
  for (const Index r : rows) g.noalias() += x.row(r).transpose() * x.row(r);
  return 0.5 * (g + g.transpose());
}

inline Matrix gram_inverse_or_collapse(const DesignMatrix& x, const std::vector<Index>& rows) {
  SpdMatrix g(rows_gram(x, rows));
  if (!g.positive_definite()) {
    throw Error(ErrorCode::RankCollapse, "selected rows do not span the design space");
  }
  return g.inverse();
}

// F(S; X) from a fresh factorization; +inf when singular.
inline double fresh_objective(const DesignMatrix& x, const std::vector<Index>& rows) {
  SpdMatrix g(rows_gram(x, rows));
  if (!g.positive_definite()) return std::numeric_limits<double>::infinity();
  return trace_inverse(g);
}

inline void record_audit(Selection& sel, double accelerated, double fresh) {
  if (!std::isfinite(accelerated) || !std::isfinite(fresh)) return;
  ++sel.audited_candidates;
  const double rel = std::abs(accelerated - fresh) / std::max(std::abs(fresh), 1e-300);
  sel.max_audit_rel_error = std::max(sel.max_audit_rel_error, rel);
}

}  // namespace optsel::detail
