#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "optsel/selectors.hpp"

namespace optsel {
namespace {

class Categorical {
 public:
  explicit Categorical(const Vector& weights) : cumulative_(weights.size()) {
    double acc = 0.0;
    for (Index i = 0; i < weights.size(); ++i) {
      acc += std::max(weights(i), 0.0);
      cumulative_[static_cast<std::size_t>(i)] = acc;
    }
    total_ = acc;
  }

  Index draw(Rng& rng) const {
    const double u = uniform01(rng) * total_;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<Index>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
  double total_ = 0.0;
};

// ceil with a guard so that ratios equal to an integer up to roundoff do not
// round up to the next integer.
int copies_for(double pi_i, int k, double p1_i) {
  const double ratio = pi_i / (static_cast<double>(k) * p1_i);
  return std::max(1, static_cast<int>(std::ceil(ratio * (1.0 - 1e-12))));
}

Selection finish(std::map<Index, int>& counts, SamplingMode mode, int k, Index p) {
  Selection sel;
  sel.mode = mode;
  sel.budget_k = k;
  for (const auto& [idx, m] : counts) {
    sel.indices.push_back(idx);
    sel.multiplicities.push_back(m);
  }
  if (sel.total_count() < static_cast<long>(p)) {
    throw Error(ErrorCode::EmptySelection,
                "sampling drew " + std::to_string(sel.total_count()) +
                    " measurements, fewer than p=" + std::to_string(p));
  }
  return sel;
}

void check_inputs(const SamplingDistributions& dists, const WeightVector& pi_star, int k) {
  if (k <= 0) throw Error(ErrorCode::InvalidArgument, "sampling: k must be positive");
  if (pi_star.size() != dists.with_replacement.size() ||
      pi_star.size() != dists.without_replacement.size()) {
    throw Error(ErrorCode::InvalidArgument, "sampling: weight and distribution sizes differ");
  }
}

}  // namespace

long Selection::total_count() const {
  return std::accumulate(multiplicities.begin(), multiplicities.end(), 0L);
}

Selection Selection::from_indices(std::vector<Index> idx, int budget_k) {
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) {
    throw Error(ErrorCode::InvalidArgument, "selection indices must be distinct");
  }
  Selection sel;
  sel.indices = std::move(idx);
  sel.multiplicities.assign(sel.indices.size(), 1);
  sel.mode = SamplingMode::WithoutReplacement;
  sel.budget_k = budget_k;
  return sel;
}

Matrix selection_gram(const DesignMatrix& x, const Selection& sel) {
  Matrix g = Matrix::Zero(x.cols(), x.cols());
  for (std::size_t t = 0; t < sel.indices.size(); ++t) {
    const auto row = x.row(sel.indices[t]);
    g.noalias() += static_cast<double>(sel.multiplicities[t]) * row.transpose() * row;
  }
  return 0.5 * (g + g.transpose());
}

DesignMatrix expand_rows(const DesignMatrix& x, const Selection& sel) {
  DesignMatrix out(sel.total_count(), x.cols());
  Index r = 0;
  for (std::size_t t = 0; t < sel.indices.size(); ++t) {
    for (int c = 0; c < sel.multiplicities[t]; ++c) out.row(r++) = x.row(sel.indices[t]);
  }
  return out;
}

SamplingDistributions build_distributions(const WeightVector& pi_star, const DesignMatrix& x) {
  if (pi_star.size() != x.rows()) {
    throw Error(ErrorCode::InvalidArgument, "build_distributions: size mismatch");
  }
  SpdMatrix sigma(weighted_gram(x, pi_star.values));
  if (!sigma.positive_definite()) {
    throw Error(ErrorCode::SingularWeighting, "build_distributions: Sigma_* is singular");
  }
  const Matrix w = sigma.factor().solve(x.transpose());  // Sigma^{-1} X^T
  const Vector leverage = x.cwiseProduct(w.transpose()).rowwise().sum();

  SamplingDistributions d;
  d.dim = x.cols();
  const double p = static_cast<double>(x.cols());
  d.with_replacement = pi_star.values.cwiseProduct(leverage) / p;
  d.without_replacement = pi_star.values / pi_star.budget_k;
  return d;
}

Selection sample_soft(const SamplingDistributions& dists, const WeightVector& pi_star, int k,
                      SamplingMode mode, std::uint64_t seed) {
  check_inputs(dists, pi_star, k);
  Rng rng(seed);
  std::map<Index, int> counts;
  if (mode == SamplingMode::WithReplacement) {
    const Categorical cat(dists.with_replacement);
    for (int t = 0; t < k; ++t) {
      const Index i = cat.draw(rng);
      counts[i] += copies_for(pi_star.values(i), k, dists.with_replacement(i));
    }
  } else {
    for (Index i = 0; i < pi_star.size(); ++i) {
      const double rate = static_cast<double>(k) * dists.without_replacement(i);
      if (uniform01(rng) < rate) counts[i] += 1;
    }
  }
  return finish(counts, mode, k, dists.dim);
}

Selection sample_hard(const SamplingDistributions& dists, const WeightVector& pi_star, int k,
                      SamplingMode mode, std::uint64_t seed) {
  check_inputs(dists, pi_star, k);
  Rng rng(seed);
  const Index n = pi_star.size();
  std::map<Index, int> counts;
  long total = 0;
  if (mode == SamplingMode::WithReplacement) {
    const Categorical cat(dists.with_replacement);
    std::vector<bool> visited(static_cast<std::size_t>(n), false);
    Index distinct_visited = 0;
    // Rows with zero mass can never be drawn; R_t = [n] is then unreachable.
    const Index reachable = (dists.with_replacement.array() > 0.0).count();
    while (distinct_visited < reachable) {
      const Index i = cat.draw(rng);
      const int w = copies_for(pi_star.values(i), k, dists.with_replacement(i));
      if (total + w > k) break;
      total += w;
      counts[i] += w;
      if (!visited[static_cast<std::size_t>(i)]) {
        visited[static_cast<std::size_t>(i)] = true;
        ++distinct_visited;
      }
    }
  } else {
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    for (std::size_t t = order.size(); t > 1; --t) {
      const auto j = static_cast<std::size_t>(uniform_index(rng, t));
      std::swap(order[t - 1], order[j]);
    }
    for (const Index i : order) {
      const double rate = static_cast<double>(k) * dists.without_replacement(i);
      const int w = uniform01(rng) < rate ? 1 : 0;
      if (total + w > k) break;
      total += w;
      if (w) counts[i] += 1;
    }
  }
  return finish(counts, mode, k, dists.dim);
}

}  // namespace optsel
