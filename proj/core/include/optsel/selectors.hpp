#pragma once

#include <cstdint>
#include <vector>

#include "optsel/relaxation.hpp"
#include "optsel/types.hpp"

namespace optsel {

/// A chosen multiset of pool rows. Indices are ascending and distinct;
/// repeated draws of a row are folded into its multiplicity.
struct Selection {
  std::vector<Index> indices;
  std::vector<int> multiplicities;
  SamplingMode mode = SamplingMode::WithoutReplacement;
  int budget_k = 0;

  /// Objective after each accepted greedy removal or exchange, starting
  /// with the initial subset. Empty for sampling methods.
  std::vector<double> objective_path;
  /// Rank-one candidate scores that were re-derived from a fresh
  /// factorization, and the worst relative disagreement seen.
  std::size_t audited_candidates = 0;
  double max_audit_rel_error = 0.0;

  std::size_t size() const noexcept { return indices.size(); }
  /// Sum of multiplicities, i.e. the number of measurements.
  long total_count() const;

  /// Builds a without-replacement selection from distinct indices.
  static Selection from_indices(std::vector<Index> idx, int budget_k);
};

/// Sum_i m_i x_i x_i^T over the selection.
Matrix selection_gram(const DesignMatrix& x, const Selection& sel);

/// The selected rows, each repeated by its multiplicity, in selection order.
DesignMatrix expand_rows(const DesignMatrix& x, const Selection& sel);

struct SamplingDistributions {
  Vector with_replacement;     // p1_j = pi_j x_j^T Sigma^{-1} x_j / p
  Vector without_replacement;  // p2_j = pi_j / k
  Index dim = 0;               // p
};

/// Throws SingularWeighting when X^T diag(pi) X is not positive definite.
SamplingDistributions build_distributions(const WeightVector& pi_star, const DesignMatrix& x);

/// Size-in-expectation sampling. With replacement: k categorical draws from
/// p1, each adding ceil(pi_i / (k p1_i)) copies. Without replacement: one
/// Bernoulli(pi_i) coin per row. Throws EmptySelection when fewer than p
/// measurements are drawn.
Selection sample_soft(const SamplingDistributions& dists, const WeightVector& pi_star, int k,
                      SamplingMode mode, std::uint64_t seed);

/// Hard-budget sampling: as sample_soft, but rows are visited until the next
/// draw would overflow k or every row has been visited. Without replacement
/// the visit order is a seeded uniform permutation. Never exceeds k.
Selection sample_hard(const SamplingDistributions& dists, const WeightVector& pi_star, int k,
                      SamplingMode mode, std::uint64_t seed);

struct SearchOptions {
  /// Re-derive every candidate score from a fresh factorization instead of
  /// spot-checking one candidate per step. Quadratic slowdown; tests only.
  bool audit_all = false;
  /// Seed for the per-step spot check.
  std::uint64_t audit_seed = 0;
};

/// Backward greedy removal from s0 down to k rows using rank-one downdates
/// of the Gram inverse. Ties go to the lowest index. Throws RankCollapse
/// when X_{s0} is singular or every removal would make it so.
Selection greedy_remove(const DesignMatrix& x, std::vector<Index> s0, int k,
                        const SearchOptions& opts = {});

/// Greedy removal seeded with the support of a without-replacement
/// relaxation solution. When thresholding leaves fewer than k rows the
/// largest remaining weights are added back.
Selection greedy_from_relaxation(const DesignMatrix& x, const WeightVector& pi_star, int k,
                                 const SearchOptions& opts = {});

/// Solves the without-replacement relaxation, then greedy_from_relaxation.
Selection greedy_select(const DesignMatrix& x, int k, const SolverConfig& cfg = {});

/// k distinct indices drawn uniformly, ascending.
std::vector<Index> random_subset(Index n, int k, std::uint64_t seed);

/// Best-pair exchange local search on F(S; X). Each candidate (i out, j in)
/// is scored with two Sherman-Morrison updates, add first. Stops when no
/// exchange lowers F by more than 1e-12 (relative to max(1, F)) or after
/// max_exchanges. Throws RankCollapse if init is singular.
Selection fedorov_exchange(const DesignMatrix& x, int k, const Selection& init, int max_exchanges,
                           std::uint64_t seed, const SearchOptions& opts = {});

enum class BaselineMethod { Uniform, LeverageScore, PredictiveLength };

/// k distinct rows, uniformly or with probability proportional to the
/// leverage score / row norm, drawn sequentially without replacement.
Selection baseline_sample(const DesignMatrix& x, int k, BaselineMethod method,
                          std::uint64_t seed);

/// Baseline inclusion weights (unnormalized).
Vector baseline_weights(const DesignMatrix& x, BaselineMethod method);

/// OLS on the expanded selection; y holds one response per measurement in
/// expand_rows order. Throws SingularMatrix.
Vector subset_ols(const DesignMatrix& x, const Selection& sel, const Vector& y);

}  // namespace optsel
