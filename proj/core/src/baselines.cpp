#include <algorithm>
#include <numeric>

#include "optsel/selectors.hpp"

namespace optsel {

Vector baseline_weights(const DesignMatrix& x, BaselineMethod method) {
  switch (method) {
    case BaselineMethod::Uniform:
      return Vector::Ones(x.rows());
    case BaselineMethod::LeverageScore: {
      SpdMatrix g(gram(x));
      const Matrix w = g.factor().solve(x.transpose());
      return x.cwiseProduct(w.transpose()).rowwise().sum().cwiseMax(0.0);
    }
    case BaselineMethod::PredictiveLength:
      return x.rowwise().norm();
  }
  return Vector::Ones(x.rows());
}

Selection baseline_sample(const DesignMatrix& x, int k, BaselineMethod method,
                          std::uint64_t seed) {
  const Index n = x.rows();
  if (k < 0 || k > n) {
    throw Error(ErrorCode::InvalidArgument, "baseline_sample: need 0 <= k <= n");
  }
  if (method == BaselineMethod::Uniform) {
    return Selection::from_indices(random_subset(n, k, seed), k);
  }

  Vector weights = baseline_weights(x, method);
  Rng rng(seed);
  std::vector<Index> chosen;
  chosen.reserve(static_cast<std::size_t>(k));
  double remaining = weights.sum();
  for (int t = 0; t < k; ++t) {
    Index pick = -1;
    if (remaining > 0.0) {
      const double u = uniform01(rng) * remaining;
      double acc = 0.0;
      for (Index i = 0; i < n; ++i) {
        if (weights(i) <= 0.0) continue;
        acc += weights(i);
        pick = i;
        if (u < acc) break;
      }
    }
    if (pick < 0) {
      // Only zero-weight rows are left; fall back to a uniform draw among them.
      std::vector<Index> rest;
      for (Index i = 0; i < n; ++i) {
        if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) rest.push_back(i);
      }
      pick = rest[static_cast<std::size_t>(uniform_index(rng, rest.size()))];
    }
    chosen.push_back(pick);
    remaining -= std::max(weights(pick), 0.0);
    weights(pick) = 0.0;
    // Renormalize from scratch now and then so the running total does not drift.
    if ((t & 63) == 63) remaining = weights.sum();
  }
  return Selection::from_indices(std::move(chosen), k);
}

}  // namespace optsel
