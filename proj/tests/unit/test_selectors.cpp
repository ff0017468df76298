#include <doctest.h>

#include <algorithm>
#include <set>

#include "optsel/bench.hpp"
#include "optsel/selectors.hpp"
#include "support/oracles.hpp"

using namespace optsel;
using optsel::testing::random_design;

namespace {

WeightVector weights(std::initializer_list<double> v, double k, bool capped = true) {
  WeightVector w;
  w.values.resize(static_cast<Index>(v.size()));
  Index i = 0;
  for (const double e : v) w.values(i++) = e;
  w.budget_k = k;
  w.box_capped = capped;
  return w;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// p orthonormal rows followed by tiny noise rows.
DesignMatrix orthonormal_plus_noise(Index p, Index extra, std::uint64_t seed) {
  DesignMatrix x(p + extra, p);
  x.topRows(p) = DesignMatrix::Identity(p, p);
  x.bottomRows(extra) = 1e-3 * random_design(extra, p, seed);
  return x;
}

}  // namespace

// ---------------------------------------------------------------------------
// Sampling distributions

TEST_CASE("distributions on the identity design are uniform") {
  const DesignMatrix x = DesignMatrix::Identity(3, 3);
  const auto d = build_distributions(weights({1, 1, 1}, 3), x);
  for (Index i = 0; i < 3; ++i) {
    CHECK(d.with_replacement(i) == doctest::Approx(1.0 / 3));
    CHECK(d.without_replacement(i) == doctest::Approx(1.0 / 3));
  }
}

TEST_CASE("distributions on a 4x2 block design match hand computation") {
  DesignMatrix x(4, 2);
  x << 1, 0, 1, 0, 0, 1, 0, 2;
  const auto d = build_distributions(weights({1, 0.5, 0.5, 1}, 3), x);
  // Sigma = diag(1.5, 4.5); leverages 2/3, 2/3, 2/9, 8/9.
  CHECK(d.with_replacement(0) == doctest::Approx(1.0 / 3));
  CHECK(d.with_replacement(1) == doctest::Approx(1.0 / 6));
  CHECK(d.with_replacement(2) == doctest::Approx(1.0 / 18));
  CHECK(d.with_replacement(3) == doctest::Approx(4.0 / 9));
  CHECK(d.without_replacement(3) == doctest::Approx(1.0 / 3));
}

TEST_CASE("distributions sum to one at the relaxation optimum") {
  for (std::uint64_t s = 0; s < 15; ++s) {
    const DesignMatrix x = random_design(60, 4, 40 + s);
    const auto mode = s % 2 ? SamplingMode::WithReplacement : SamplingMode::WithoutReplacement;
    const auto r = solve_relaxation(x, 12, mode);
    const auto d = build_distributions(r.weights, x);
    CHECK(std::abs(d.with_replacement.sum() - 1.0) <= 1e-9);
    CHECK(std::abs(d.without_replacement.sum() - 1.0) <= 1e-9);
    CHECK(d.with_replacement.minCoeff() >= 0.0);
    CHECK(d.without_replacement.minCoeff() >= 0.0);
    if (mode == SamplingMode::WithoutReplacement) {
      CHECK((12.0 * d.without_replacement.array()).maxCoeff() <= 1 + 1e-9);
    }
  }
}

// ---------------------------------------------------------------------------
// Soft and hard sampling

TEST_CASE("soft sampling with unit weights keeps every row") {
  const DesignMatrix x = DesignMatrix::Identity(4, 4);
  const auto pi = weights({1, 1, 1, 1}, 4);
  const auto d = build_distributions(pi, x);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Selection s = sample_soft(d, pi, 4, SamplingMode::WithoutReplacement, seed);
    CHECK(s.indices == std::vector<Index>{0, 1, 2, 3});
  }
}

TEST_CASE("soft with-replacement sampling on flat weights yields exactly k") {
  // Two stacked copies of the identity: equal leverages, so p1 is uniform and
  // every ceil weight is 1.
  const Index p = 3;
  DesignMatrix x(2 * p, p);
  x << DesignMatrix::Identity(p, p), DesignMatrix::Identity(p, p);
  WeightVector pi{Vector::Constant(2 * p, 0.5), static_cast<double>(p), false};
  const auto d = build_distributions(pi, x);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    try {
      const Selection s = sample_soft(d, pi, static_cast<int>(p), SamplingMode::WithReplacement, seed);
      CHECK(s.total_count() == p);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptySelection);
    }
  }
}

TEST_CASE("soft without-replacement size has mean k") {
  const DesignMatrix x = random_design(100, 5, 77);
  const int k = 20;
  const auto r = solve_relaxation(x, k, SamplingMode::WithoutReplacement);
  const auto d = build_distributions(r.weights, x);
  std::vector<double> sizes;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    sizes.push_back(static_cast<double>(
        sample_soft(d, r.weights, k, SamplingMode::WithoutReplacement, seed).total_count()));
  }
  double mean = 0.0;
  for (const double v : sizes) mean += v;
  mean /= static_cast<double>(sizes.size());
  double var = 0.0;
  for (const double v : sizes) var += (v - mean) * (v - mean);
  var /= static_cast<double>(sizes.size() - 1);
  const double se = std::sqrt(var / static_cast<double>(sizes.size()));
  CHECK(std::abs(mean - k) <= 3 * se);
}

TEST_CASE("soft sampling size tail") {
  const DesignMatrix x = random_design(200, 4, 78);
  const int k = 16;
  const double delta = 0.25;
  for (const auto mode : {SamplingMode::WithReplacement, SamplingMode::WithoutReplacement}) {
    const auto r = solve_relaxation(x, k, mode);
    const auto d = build_distributions(r.weights, x);
    int over = 0;
    const int runs = 1000;
    for (int seed = 0; seed < runs; ++seed) {
      const auto s = sample_soft(d, r.weights, k, mode, static_cast<std::uint64_t>(seed));
      if (static_cast<double>(s.total_count()) > 2 * (1 + 1 / delta) * k) ++over;
    }
    CHECK(static_cast<double>(over) / runs <= delta);
  }
}

TEST_CASE("hard sampling picks the orthonormal rows carrying all mass") {
  const Index p = 3;
  const DesignMatrix x = orthonormal_plus_noise(p, 5, 1);
  const auto pi = weights({1, 1, 1, 0, 0, 0, 0, 0}, 3);
  const auto d = build_distributions(pi, x);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Selection s = sample_hard(d, pi, 3, SamplingMode::WithoutReplacement, seed);
    CHECK(s.indices == std::vector<Index>{0, 1, 2});
    CHECK(s.total_count() == 3);
    // With replacement a row may be drawn again before all three are visited.
    const Selection r = sample_hard(d, pi, 3, SamplingMode::WithReplacement, seed);
    CHECK(r.total_count() == 3);
    for (const Index i : r.indices) CHECK(i < 3);
  }
}

TEST_CASE("hard sampling never exceeds the budget") {
  const DesignMatrix x = random_design(80, 3, 79);
  for (const auto mode : {SamplingMode::WithReplacement, SamplingMode::WithoutReplacement}) {
    const auto r = solve_relaxation(x, 10, mode);
    const auto d = build_distributions(r.weights, x);
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
      try {
        CHECK(sample_hard(d, r.weights, 10, mode, seed).total_count() <= 10);
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptySelection);
      }
    }
  }
}

TEST_CASE("hard sampling objective is within a constant of the certificate") {
  const DesignMatrix x = random_design(50, 3, 80);
  const int k = 12;
  const auto r = solve_relaxation(x, k, SamplingMode::WithoutReplacement);
  const auto d = build_distributions(r.weights, x);
  std::vector<double> values;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    try {
      values.push_back(eval_objective(
          x, sample_hard(d, r.weights, k, SamplingMode::WithoutReplacement, seed)));
    } catch (const Error&) {
      values.push_back(std::numeric_limits<double>::infinity());
    }
  }
  CHECK(median(values) <= 4 * r.objective);
}

TEST_CASE("sampling is a pure function of the seed") {
  const DesignMatrix x = random_design(60, 3, 81);
  const auto r = solve_relaxation(x, 9, SamplingMode::WithReplacement);
  const auto d = build_distributions(r.weights, x);
  const auto a = sample_soft(d, r.weights, 9, SamplingMode::WithReplacement, 5);
  const auto b = sample_soft(d, r.weights, 9, SamplingMode::WithReplacement, 5);
  CHECK(a.indices == b.indices);
  CHECK(a.multiplicities == b.multiplicities);
}

TEST_CASE("soft sampling spectrally approximates the relaxed Gram matrix") {
  const Index p = 3;
  const int k = 20 * static_cast<int>(p);
  int good = 0;
  const int runs = 100;
  const DesignMatrix x = random_design(600, p, 82);
  const auto r = solve_relaxation(x, k, SamplingMode::WithoutReplacement);
  const auto d = build_distributions(r.weights, x);
  const Matrix root = inverse_sqrt(SpdMatrix(weighted_gram(x, r.weights.values)));
  for (int seed = 0; seed < runs; ++seed) {
    const auto s =
        sample_soft(d, r.weights, k, SamplingMode::WithoutReplacement, static_cast<std::uint64_t>(seed));
    const Vector ev = symmetric_eigenvalues(root * selection_gram(x, s) * root);
    if (ev.minCoeff() >= 0.5 && ev.maxCoeff() <= 1.5) ++good;
  }
  CHECK(good >= runs * 8 / 10);
}

TEST_CASE("too few draws surface as EmptySelection") {
  const DesignMatrix x = DesignMatrix::Identity(3, 3);
  const auto pi = weights({1e-9, 1e-9, 1e-9}, 3);
  const auto d = build_distributions(pi, x);
  try {
    (void)sample_soft(d, pi, 3, SamplingMode::WithoutReplacement, 0);
    FAIL("expected EmptySelection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptySelection);
  }
}

// ---------------------------------------------------------------------------
// Greedy removal

TEST_CASE("greedy_remove with nothing to remove") {
  const DesignMatrix x = random_design(10, 2, 83);
  const Selection s = greedy_remove(x, {7, 1, 4}, 3);
  CHECK(s.indices == std::vector<Index>{1, 4, 7});
}

TEST_CASE("greedy_remove drops a duplicated direction") {
  DesignMatrix x(4, 3);
  x << 1, 0, 0, 0, 1, 0, 0, 0, 1, 1, 0, 0;
  const Selection s = greedy_remove(x, {0, 1, 2, 3}, 3);
  CHECK(eval_objective(x, s) == doctest::Approx(3.0));
  CHECK(std::count(s.indices.begin(), s.indices.end(), 1) == 1);
  CHECK(std::count(s.indices.begin(), s.indices.end(), 2) == 1);
  // Equal scores for rows 0 and 3: the lower index is removed.
  CHECK(s.indices == std::vector<Index>{1, 2, 3});
}

TEST_CASE("greedy_remove bounds") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const DesignMatrix x = random_design(10, 2, 900 + s);
    std::vector<Index> all(10);
    for (Index i = 0; i < 10; ++i) all[static_cast<std::size_t>(i)] = i;
    const Selection sel = greedy_remove(x, all, 4);
    const double f = eval_objective(x, sel);
    const double f0 = testing::subset_objective(x, all);
    CHECK(f <= (10.0 - 2 + 1) / (4.0 - 2 + 1) * f0 * (1 + 1e-12));
    CHECK(f <= testing::exhaustive_best(x, 4) * 9.0 / 3.0);
    CHECK(std::is_sorted(sel.objective_path.begin(), sel.objective_path.end()));
  }
}

TEST_CASE("greedy_remove scores agree with refactorization") {
  const DesignMatrix x = random_design(60, 4, 84);
  std::vector<Index> all(60);
  for (Index i = 0; i < 60; ++i) all[static_cast<std::size_t>(i)] = i;
  const Selection s = greedy_remove(x, all, 8, SearchOptions{true, 0});
  CHECK(s.audited_candidates > 100);
  CHECK(s.max_audit_rel_error <= 1e-8);
}

TEST_CASE("greedy_remove input checks") {
  const DesignMatrix x = random_design(6, 2, 85);
  CHECK_THROWS_AS((void)greedy_remove(x, {0, 0, 1}, 2), Error);
  CHECK_THROWS_AS((void)greedy_remove(x, {0, 1}, 3), Error);
  CHECK_THROWS_AS((void)greedy_remove(x, {0, 9}, 2), Error);
  DesignMatrix degenerate = DesignMatrix::Zero(4, 2);
  degenerate(0, 0) = 1;
  try {
    (void)greedy_remove(degenerate, {0, 1, 2, 3}, 2);
    FAIL("expected RankCollapse");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankCollapse);
  }
}

TEST_CASE("greedy_select on the identity with one extra row") {
  const Index p = 3;
  DesignMatrix x(p + 1, p);
  x << DesignMatrix::Identity(p, p), DesignMatrix::Identity(1, p);
  const int k = static_cast<int>(p) + 1;
  const Selection s = greedy_select(x, k);
  const double cert = minimax_certificate(x, k, SamplingMode::WithoutReplacement);
  CHECK(eval_objective(x, s) <= (1 + p * (p + 1) / 2.0) * cert);
}

TEST_CASE("greedy_select is near the exhaustive optimum") {
  const int k = 3;
  const double p = 2;
  const double factor = 1 + p * (p + 1) / (2 * (k - p + 1));
  for (std::uint64_t s = 0; s < 20; ++s) {
    const DesignMatrix x = random_design(8, 2, 1000 + s);
    const Selection sel = greedy_select(x, k);
    CHECK(sel.size() == static_cast<std::size_t>(k));
    CHECK(eval_objective(x, sel) <= factor * testing::exhaustive_best(x, k));
  }
}

// ---------------------------------------------------------------------------
// Fedorov exchange

TEST_CASE("fedorov keeps a locally optimal start") {
  const DesignMatrix x = orthonormal_plus_noise(3, 6, 2);
  const Selection init = Selection::from_indices({0, 1, 2}, 3);
  const Selection out = fedorov_exchange(x, 3, init, 100, 0);
  CHECK(out.indices == init.indices);
  CHECK(out.objective_path.size() == 1);
}

TEST_CASE("fedorov reaches the exhaustive optimum on small pools") {
  int hits = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const DesignMatrix x = random_design(10, 2, 1100 + s);
    const Selection init = Selection::from_indices(random_subset(10, 4, s), 4);
    const double f_init = eval_objective(x, init);
    const Selection out = fedorov_exchange(x, 4, init, 1000, s, SearchOptions{true, 0});
    const double f = eval_objective(x, out);
    CHECK(f <= f_init);
    std::set<Index> distinct(out.indices.begin(), out.indices.end());
    CHECK(distinct.size() == 4);
    for (std::size_t t = 1; t < out.objective_path.size(); ++t) {
      CHECK(out.objective_path[t] < out.objective_path[t - 1]);
    }
    CHECK(out.max_audit_rel_error <= 1e-8);
    if (f <= testing::exhaustive_best(x, 4) * (1 + 1e-9)) ++hits;
  }
  CHECK(hits >= 90);
}

TEST_CASE("fedorov input checks") {
  const DesignMatrix x = random_design(8, 2, 86);
  CHECK_THROWS_AS((void)fedorov_exchange(x, 3, Selection::from_indices({0, 1}, 3), 10, 0), Error);
  DesignMatrix degenerate = DesignMatrix::Zero(5, 2);
  degenerate(0, 0) = 1;
  try {
    (void)fedorov_exchange(degenerate, 2, Selection::from_indices({0, 1}, 2), 10, 0);
    FAIL("expected RankCollapse");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankCollapse);
  }
}

TEST_CASE("random_subset draws distinct sorted indices") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto idx = random_subset(20, 7, s);
    CHECK(idx.size() == 7);
    CHECK(std::is_sorted(idx.begin(), idx.end()));
    CHECK(std::adjacent_find(idx.begin(), idx.end()) == idx.end());
  }
}

// ---------------------------------------------------------------------------
// Baselines

TEST_CASE("baselines take every row when k = n") {
  const DesignMatrix x = random_design(6, 2, 87);
  for (const auto m :
       {BaselineMethod::Uniform, BaselineMethod::LeverageScore, BaselineMethod::PredictiveLength}) {
    CHECK(baseline_sample(x, 6, m, 3).indices == std::vector<Index>{0, 1, 2, 3, 4, 5});
  }
}

TEST_CASE("leverage scores of the identity are all one") {
  const Vector w = baseline_weights(DesignMatrix::Identity(4, 4), BaselineMethod::LeverageScore);
  CHECK((w - Vector::Ones(4)).norm() < 1e-12);
}

TEST_CASE("baseline inclusion frequencies follow the weights") {
  const DesignMatrix x = random_design(6, 2, 88);
  const int runs = 20000;
  for (const auto m :
       {BaselineMethod::Uniform, BaselineMethod::LeverageScore, BaselineMethod::PredictiveLength}) {
    const Vector w = baseline_weights(x, m);
    const Vector prob = w / w.sum();
    std::vector<int> hits(6, 0);
    for (int seed = 0; seed < runs; ++seed) {
      const auto s = baseline_sample(x, 1, m, static_cast<std::uint64_t>(seed));
      REQUIRE(s.size() == 1);
      ++hits[static_cast<std::size_t>(s.indices[0])];
    }
    for (Index i = 0; i < 6; ++i) {
      const double f = static_cast<double>(hits[static_cast<std::size_t>(i)]) / runs;
      const double se = std::sqrt(prob(i) * (1 - prob(i)) / runs);
      CHECK(std::abs(f - prob(i)) <= 3 * se + 1e-12);
    }
  }
}

// ---------------------------------------------------------------------------
// Subset OLS

TEST_CASE("subset_ols recovers noiseless coefficients") {
  const DesignMatrix x = random_design(30, 4, 89);
  Vector beta(4);
  beta << 1.5, -2, 0.25, 3;
  Selection s = Selection::from_indices({0, 3, 5, 8, 13, 21}, 6);
  const Vector y = expand_rows(x, s) * beta;
  CHECK((subset_ols(x, s, y) - beta).norm() < 1e-10);
}

TEST_CASE("duplicated rows equal one averaged row with double weight") {
  const DesignMatrix x = random_design(10, 3, 90);
  Selection s;
  s.indices = {1, 4, 6, 7};
  s.multiplicities = {1, 2, 1, 1};
  s.mode = SamplingMode::WithReplacement;
  Vector y(5);
  y << 0.3, 1.1, -0.7, 2.0, 0.4;
  const Vector b = subset_ols(x, s, y);

  // Weighted least squares with the two responses for row 4 averaged.
  Matrix g = Matrix::Zero(3, 3);
  Vector rhs = Vector::Zero(3);
  const std::vector<std::pair<Index, std::pair<double, double>>> rows = {
      {1, {1.0, 0.3}}, {4, {2.0, 0.5 * (1.1 - 0.7)}}, {6, {1.0, 2.0}}, {7, {1.0, 0.4}}};
  for (const auto& [i, wy] : rows) {
    g += wy.first * x.row(i).transpose() * x.row(i);
    rhs += wy.first * wy.second * x.row(i).transpose();
  }
  CHECK((b - g.ldlt().solve(rhs)).norm() < 1e-10);
}

TEST_CASE("subset_ols risk matches sigma^2 tr[(X_S^T X_S)^{-1}]") {
  const DesignMatrix x = random_design(40, 3, 91);
  Selection s = Selection::from_indices({2, 5, 9, 11, 17, 23, 31, 38}, 8);
  const DesignMatrix xs = expand_rows(x, s);
  const Vector beta = Vector::Ones(3);
  Rng rng(92);
  const double sigma = 0.7;
  double total = 0.0;
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) {
    Vector y = xs * beta;
    for (Index i = 0; i < y.size(); ++i) y(i) += sigma * standard_normal(rng);
    total += (subset_ols(x, s, y) - beta).squaredNorm();
  }
  const double expect = sigma * sigma * eval_objective(x, s);
  CHECK(std::abs(total / draws - expect) <= 0.02 * expect);
}

TEST_CASE("subset_ols rejects mismatched responses") {
  const DesignMatrix x = random_design(10, 2, 93);
  CHECK_THROWS_AS((void)subset_ols(x, Selection::from_indices({0, 1, 2}, 3), Vector::Zero(2)),
                  Error);
}
