#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "optsel/selectors.hpp"
#include "search_common.hpp"

namespace optsel {

Selection greedy_remove(const DesignMatrix& x, std::vector<Index> s0, int k,
                        const SearchOptions& opts) {
  const Index p = x.cols();
  std::sort(s0.begin(), s0.end());
  if (std::adjacent_find(s0.begin(), s0.end()) != s0.end()) {
    throw Error(ErrorCode::InvalidArgument, "greedy_remove: initial set has duplicates");
  }
  if (!s0.empty() && (s0.front() < 0 || s0.back() >= x.rows())) {
    throw Error(ErrorCode::InvalidArgument, "greedy_remove: index out of range");
  }
  if (k < p || static_cast<Index>(s0.size()) < k) {
    throw Error(ErrorCode::InvalidArgument,
                "greedy_remove: need |s0| >= k >= p (|s0|=" + std::to_string(s0.size()) +
                    ", k=" + std::to_string(k) + ", p=" + std::to_string(p) + ")");
  }

  std::vector<Index> active = std::move(s0);
  Matrix inv = detail::gram_inverse_or_collapse(x, active);

  Selection sel;
  sel.mode = SamplingMode::WithoutReplacement;
  sel.budget_k = k;
  sel.objective_path.push_back(inv.trace());

  Rng audit_rng(opts.audit_seed);
  int step = 0;
  while (static_cast<Index>(active.size()) > k) {
    if (step > 0 && step % detail::kRefactorEvery == 0) {
      inv = detail::gram_inverse_or_collapse(x, active);
    }
    const auto m = static_cast<Index>(active.size());
    DesignMatrix rows(m, p);
    for (Index t = 0; t < m; ++t) rows.row(t) = x.row(active[static_cast<std::size_t>(t)]);
    const Matrix u = rows * inv;
    const Vector lev = u.cwiseProduct(rows).rowwise().sum();  // x_j^T M x_j
    const Vector sq = u.rowwise().squaredNorm();              // x_j^T M^2 x_j
    const double tr = inv.trace();

    Vector score(m);
    for (Index t = 0; t < m; ++t) {
      const double denom = 1.0 - lev(t);
      score(t) = denom > detail::kPivotFloor ? tr + sq(t) / denom
                                             : std::numeric_limits<double>::infinity();
    }
    Index best = 0;
    for (Index t = 1; t < m; ++t) {
      if (score(t) < score(best)) best = t;
    }
    if (!std::isfinite(score(best))) {
      throw Error(ErrorCode::RankCollapse,
                  "greedy_remove: every removal leaves a singular Gram matrix");
    }

    auto audit_one = [&](Index t) {
      std::vector<Index> trial;
      trial.reserve(active.size() - 1);
      for (Index s = 0; s < m; ++s) {
        if (s != t) trial.push_back(active[static_cast<std::size_t>(s)]);
      }
      detail::record_audit(sel, score(t), detail::fresh_objective(x, trial));
    };
    if (opts.audit_all) {
      for (Index t = 0; t < m; ++t) audit_one(t);
    } else {
      audit_one(static_cast<Index>(uniform_index(audit_rng, static_cast<std::uint64_t>(m))));
    }

    inv = sherman_morrison_update(inv, x.row(active[static_cast<std::size_t>(best)]).transpose(),
                                  RankOneSign::Remove);
    active.erase(active.begin() + best);
    sel.objective_path.push_back(inv.trace());
    ++step;
  }

  sel.indices = std::move(active);
  sel.multiplicities.assign(sel.indices.size(), 1);
  return sel;
}

Selection greedy_from_relaxation(const DesignMatrix& x, const WeightVector& pi_star, int k,
                                 const SearchOptions& opts) {
  if (pi_star.size() != x.rows()) {
    throw Error(ErrorCode::InvalidArgument, "greedy_from_relaxation: size mismatch");
  }
  std::vector<Index> s0 = support(pi_star);
  if (static_cast<Index>(s0.size()) < k) {
    std::vector<Index> rest;
    for (Index i = 0; i < pi_star.size(); ++i) {
      if (!std::binary_search(s0.begin(), s0.end(), i)) rest.push_back(i);
    }
    std::stable_sort(rest.begin(), rest.end(), [&](Index a, Index b) {
      return pi_star.values(a) > pi_star.values(b);
    });
    rest.resize(static_cast<std::size_t>(k) - s0.size());
    s0.insert(s0.end(), rest.begin(), rest.end());
  }
  return greedy_remove(x, std::move(s0), k, opts);
}

Selection greedy_select(const DesignMatrix& x, int k, const SolverConfig& cfg) {
  const RelaxationResult relax = solve_relaxation(x, k, SamplingMode::WithoutReplacement, cfg);
  return greedy_from_relaxation(x, relax.weights, k);
}

}  // namespace optsel
