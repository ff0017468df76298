#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "optsel/selectors.hpp"
#include "search_common.hpp"

namespace optsel {
namespace {

// Trace of the Gram inverse after adding row j and then removing row i,
// written as two Sherman-Morrison steps over precomputed inner products:
//   a_.. = x^T M x,  b_.. = x^T M^2 x  for the current inverse M.
double exchange_score(double trace, double a_ii, double b_ii, double a_jj, double b_jj,
                      double a_ij, double b_ij) {
  // add j: M' = M - M x_j x_j^T M / d1
  const double d1 = 1.0 + a_jj;
  const double trace_added = trace - b_jj / d1;
  // x_i^T M' x_i and x_i^T M'^2 x_i
  const double a_ii_new = a_ii - a_ij * a_ij / d1;
  const double b_ii_new = b_ii - 2.0 * a_ij * b_ij / d1 + a_ij * a_ij * b_jj / (d1 * d1);
  // remove i: M'' = M' + M' x_i x_i^T M' / d2
  const double d2 = 1.0 - a_ii_new;
  if (!(d2 > detail::kPivotFloor)) return std::numeric_limits<double>::infinity();
  return trace_added + b_ii_new / d2;
}

}  // namespace

std::vector<Index> random_subset(Index n, int k, std::uint64_t seed) {
  if (k < 0 || k > n) throw Error(ErrorCode::InvalidArgument, "random_subset: need 0 <= k <= n");
  Rng rng(seed);
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (int t = 0; t < k; ++t) {
    const auto j = static_cast<std::size_t>(t) +
                   static_cast<std::size_t>(uniform_index(rng, static_cast<std::uint64_t>(n - t)));
    std::swap(pool[static_cast<std::size_t>(t)], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(k));
  std::sort(pool.begin(), pool.end());
  return pool;
}

Selection fedorov_exchange(const DesignMatrix& x, int k, const Selection& init, int max_exchanges,
                           std::uint64_t seed, const SearchOptions& opts) {
  const Index n = x.rows();
  const Index p = x.cols();
  std::vector<Index> in = init.indices;
  std::sort(in.begin(), in.end());
  if (std::adjacent_find(in.begin(), in.end()) != in.end() ||
      std::any_of(init.multiplicities.begin(), init.multiplicities.end(),
                  [](int m) { return m != 1; })) {
    throw Error(ErrorCode::InvalidArgument, "fedorov_exchange: init must hold distinct indices");
  }
  if (static_cast<int>(in.size()) != k || k < p || k > n) {
    throw Error(ErrorCode::InvalidArgument,
                "fedorov_exchange: init must have exactly k rows with p <= k <= n");
  }
  if (!in.empty() && (in.front() < 0 || in.back() >= n)) {
    throw Error(ErrorCode::InvalidArgument, "fedorov_exchange: index out of range");
  }

  std::vector<char> member(static_cast<std::size_t>(n), 0);
  for (const Index i : in) member[static_cast<std::size_t>(i)] = 1;

  Matrix inv = detail::gram_inverse_or_collapse(x, in);
  double current = inv.trace();

  Selection sel;
  sel.mode = SamplingMode::WithoutReplacement;
  sel.budget_k = k;
  sel.objective_path.push_back(current);

  Rng audit_rng(derive_seed(seed, opts.audit_seed));

  for (int exchange = 0; exchange < max_exchanges; ++exchange) {
    if (exchange > 0 && exchange % detail::kRefactorEvery == 0) {
      inv = detail::gram_inverse_or_collapse(x, in);
      current = inv.trace();
    }
    std::vector<Index> out;
    out.reserve(static_cast<std::size_t>(n - k));
    for (Index j = 0; j < n; ++j) {
      if (!member[static_cast<std::size_t>(j)]) out.push_back(j);
    }
    if (out.empty()) break;
    const auto n_in = static_cast<Index>(in.size());
    const auto n_out = static_cast<Index>(out.size());

    DesignMatrix x_in(n_in, p);
    DesignMatrix x_out(n_out, p);
    for (Index t = 0; t < n_in; ++t) x_in.row(t) = x.row(in[static_cast<std::size_t>(t)]);
    for (Index t = 0; t < n_out; ++t) x_out.row(t) = x.row(out[static_cast<std::size_t>(t)]);
    const Matrix u_in = x_in * inv;
    const Matrix u_out = x_out * inv;
    const Vector a_in = u_in.cwiseProduct(x_in).rowwise().sum();
    const Vector b_in = u_in.rowwise().squaredNorm();
    const Vector a_out = u_out.cwiseProduct(x_out).rowwise().sum();
    const Vector b_out = u_out.rowwise().squaredNorm();
    const Matrix a_cross = u_in * x_out.transpose();  // x_i^T M x_j
    const Matrix b_cross = u_in * u_out.transpose();  // x_i^T M^2 x_j

    double best = std::numeric_limits<double>::infinity();
    Index best_i = -1;
    Index best_j = -1;
    for (Index s = 0; s < n_in; ++s) {
      for (Index t = 0; t < n_out; ++t) {
        const double sc = exchange_score(current, a_in(s), b_in(s), a_out(t), b_out(t),
                                         a_cross(s, t), b_cross(s, t));
        if (sc < best) {
          best = sc;
          best_i = s;
          best_j = t;
        }
      }
    }

    auto audit_pair = [&](Index s, Index t) {
      const double sc = exchange_score(current, a_in(s), b_in(s), a_out(t), b_out(t),
                                       a_cross(s, t), b_cross(s, t));
      std::vector<Index> trial = in;
      trial[static_cast<std::size_t>(s)] = out[static_cast<std::size_t>(t)];
      detail::record_audit(sel, sc, detail::fresh_objective(x, trial));
    };
    if (opts.audit_all) {
      for (Index s = 0; s < n_in; ++s) {
        for (Index t = 0; t < n_out; ++t) audit_pair(s, t);
      }
    } else {
      audit_pair(static_cast<Index>(uniform_index(audit_rng, static_cast<std::uint64_t>(n_in))),
                 static_cast<Index>(uniform_index(audit_rng, static_cast<std::uint64_t>(n_out))));
    }

    if (best_i < 0 || !(current - best > 1e-12 * std::max(1.0, current))) break;

    const Index leave = in[static_cast<std::size_t>(best_i)];
    const Index enter = out[static_cast<std::size_t>(best_j)];
    inv = sherman_morrison_update(inv, x.row(enter).transpose(), RankOneSign::Add);
    inv = sherman_morrison_update(inv, x.row(leave).transpose(), RankOneSign::Remove);
    member[static_cast<std::size_t>(leave)] = 0;
    member[static_cast<std::size_t>(enter)] = 1;
    in[static_cast<std::size_t>(best_i)] = enter;
    std::sort(in.begin(), in.end());
    current = inv.trace();
    sel.objective_path.push_back(current);
  }

  sel.indices = std::move(in);
  sel.multiplicities.assign(sel.indices.size(), 1);
  return sel;
}

}  // namespace optsel
