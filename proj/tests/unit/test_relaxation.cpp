#include <doctest.h>

#include "optsel/relaxation.hpp"
#include "support/oracles.hpp"

using namespace optsel;
using optsel::testing::random_design;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (const double e : v) out(i++) = e;
  return out;
}

DesignMatrix identity_design(Index p) { return DesignMatrix::Identity(p, p); }

}  // namespace

TEST_CASE("objective examples") {
  const DesignMatrix x = identity_design(2);
  CHECK(objective(vec({1, 1}), x) == doctest::Approx(2.0));
  CHECK(objective(vec({2, 1}), x) == doctest::Approx(1.5));
}

TEST_CASE("objective matches explicit inverse") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const DesignMatrix x = random_design(6, 2, s);
    const Vector pi = Vector::Constant(6, 3.0 / 6.0);
    const double expect = testing::naive_objective(pi, x);
    CHECK(std::abs(objective(pi, x) - expect) <= 1e-10 * expect);
  }
}

TEST_CASE("objective rejects rank-deficient weighting") {
  const DesignMatrix x = identity_design(2);
  try {
    (void)objective(vec({1, 0}), x);
    FAIL("expected SingularWeighting");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularWeighting);
  }
}

TEST_CASE("gradient examples") {
  const DesignMatrix x = identity_design(2);
  const Vector g1 = gradient(vec({1, 1}), x);
  CHECK(g1(0) == doctest::Approx(-1.0));
  CHECK(g1(1) == doctest::Approx(-1.0));
  const Vector g2 = gradient(vec({2, 1}), x);
  CHECK(g2(0) == doctest::Approx(-0.25));
  CHECK(g2(1) == doctest::Approx(-1.0));
}

TEST_CASE("gradient matches central differences and is strictly negative") {
  Rng rng(3);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Index n = 8 + static_cast<Index>(s % 10);
    const Index p = 2 + static_cast<Index>(s % 3);
    const DesignMatrix x = random_design(n, p, 50 + s);
    const Vector pi = testing::random_uniform_vector(n, 0.2, 1.0, rng);
    const Vector fd = testing::fd_gradient([&](const Vector& v) { return objective(v, x); }, pi,
                                           1e-6);
    const Vector g = gradient(pi, x);
    CHECK((g - fd).cwiseAbs().maxCoeff() <= 1e-5);
    CHECK((g.array() < 0).all());

    Vector g2;
    CHECK(objective_and_gradient(pi, x, g2) == doctest::Approx(objective(pi, x)));
    CHECK((g2 - g).norm() < 1e-12);
  }
}

TEST_CASE("hessian examples and finite differences") {
  const Matrix h = hessian(vec({1, 1}), identity_design(2));
  CHECK((h - 2.0 * Matrix::Identity(2, 2)).norm() < 1e-14);

  Rng rng(4);
  for (std::uint64_t s = 0; s < 8; ++s) {
    const DesignMatrix x = random_design(7, 3, 70 + s);
    const Vector pi = testing::random_uniform_vector(7, 0.3, 1.0, rng);
    const Matrix fd = testing::fd_jacobian([&](const Vector& v) { return gradient(v, x); }, pi,
                                           1e-5);
    const Matrix hs = hessian(pi, x);
    CHECK((hs - fd).cwiseAbs().maxCoeff() <= 1e-4 * std::max(1.0, hs.cwiseAbs().maxCoeff()));
    CHECK((hs - hs.transpose()).norm() < 1e-12);
    CHECK(symmetric_eigenvalues(hs).minCoeff() >= -1e-10 * hs.norm());
  }
}

TEST_CASE("hessian norm bound on the flat-start level set") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Index n = 30;
    const Index p = 3;
    const int k = 6;
    const DesignMatrix x = random_design(n, p, 90 + s);
    const Matrix sigma_hat = gram(x) / static_cast<double>(n);
    const double bound =
        2.0 * std::pow(spectral_norm(x), 4) * std::pow(trace_inverse(SpdMatrix(sigma_hat)), 3);
    const RelaxationResult r = solve_relaxation(x, k, SamplingMode::WithoutReplacement);
    const Vector flat = Vector::Constant(n, static_cast<double>(k) / n);
    CHECK(spectral_norm(hessian(flat, x)) <= bound);
    CHECK(spectral_norm(hessian(r.weights, x)) <= bound);
  }
}

// ---------------------------------------------------------------------------

TEST_CASE("projection examples") {
  const double d = 1e-12;
  CHECK((project_l1_linf(vec({0.2, 0.3}), 1, 1, d) - vec({0.2, 0.3})).norm() == 0.0);
  CHECK((project_l1_linf(vec({0.8, 0.8, 0.8}), 1.5, 1, d) - vec({0.5, 0.5, 0.5})).norm() < 1e-9);
  CHECK((project_l1_linf(vec({2, 0}), 1, 1, d) - vec({1, 0})).norm() < 1e-12);
}

TEST_CASE("projection argument checks") {
  for (const auto& [c1, c2] : {std::pair{0.0, 1.0}, std::pair{1.0, 0.0}, std::pair{-1.0, 1.0}}) {
    try {
      (void)project_l1_linf(vec({0.5}), c1, c2, 1e-10);
      FAIL("expected InfeasibleBall");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InfeasibleBall);
    }
  }
  CHECK_THROWS_AS((void)project_l1_linf(vec({-0.5, 1}), 1, 1, 1e-10), Error);
}

TEST_CASE("projection agrees with active-set oracle") {
  Rng rng(21);
  for (int t = 0; t < 300; ++t) {
    const Index n = 1 + static_cast<Index>(uniform_index(rng, 7));
    const Vector y = testing::random_uniform_vector(n, 0.0, 3.0, rng);
    const double c1 = 0.1 + 4.0 * uniform01(rng);
    const double c2 = t % 4 == 0 ? kNoCap : 0.1 + 2.0 * uniform01(rng);
    const Vector got = project_l1_linf(y, c1, c2, 1e-12);
    const Vector want = testing::projection_oracle(y, c1, c2);
    CHECK((got - want).norm() <= 1e-8);
  }
}

TEST_CASE("projection output is feasible and idempotent") {
  Rng rng(22);
  for (int t = 0; t < 200; ++t) {
    const Index n = 2 + static_cast<Index>(uniform_index(rng, 40));
    const Vector y = testing::random_uniform_vector(n, 0.0, 2.0, rng);
    const double c1 = 0.5 + 0.5 * static_cast<double>(n) * uniform01(rng);
    const double c2 = 1.0;
    const double delta = 1e-10;
    const Vector x = project_l1_linf(y, c1, c2, delta);
    CHECK(x.minCoeff() >= -1e-9);
    CHECK(x.maxCoeff() <= c2 + 1e-9);
    CHECK(x.sum() <= c1 + 1e-9);
    const Vector again = project_l1_linf(x, c1, c2, delta);
    CHECK((again - x).norm() <= 2 * delta + 1e-12);
  }
}

// ---------------------------------------------------------------------------

TEST_CASE("solver config validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.alpha = 0.6;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.beta = 1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.max_iters = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("solve_relaxation on the identity design") {
  for (const auto mode : {SamplingMode::WithReplacement, SamplingMode::WithoutReplacement}) {
    const RelaxationResult r = solve_relaxation(identity_design(4), 4, mode);
    CHECK((r.weights.values - Vector::Ones(4)).norm() < 1e-9);
    CHECK(r.objective == doctest::Approx(4.0));
    CHECK(minimax_certificate(identity_design(4), 4, mode) == doctest::Approx(4.0));
  }
}

TEST_CASE("solve_relaxation preconditions") {
  const DesignMatrix x = random_design(10, 3, 1);
  CHECK_THROWS_AS((void)solve_relaxation(x, 2, SamplingMode::WithoutReplacement), Error);
  CHECK_THROWS_AS((void)solve_relaxation(x, 11, SamplingMode::WithoutReplacement), Error);
  CHECK_NOTHROW((void)solve_relaxation(x, 11, SamplingMode::WithReplacement));

  DesignMatrix flat = x;
  flat.col(2) = flat.col(0);
  try {
    (void)solve_relaxation(flat, 5, SamplingMode::WithoutReplacement);
    FAIL("expected SingularWeighting");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularWeighting);
  }
}

TEST_CASE("solve_relaxation matches Frank-Wolfe oracle on n=8, p=2, k=3") {
  for (std::uint64_t s = 0; s < 6; ++s) {
    const DesignMatrix x = random_design(8, 2, 500 + s);
    const RelaxationResult r = solve_relaxation(x, 3, SamplingMode::WithoutReplacement);
    const double oracle = testing::frank_wolfe_min(x, 3, 1.0, 4000);
    CHECK(r.objective <= oracle * (1 + 1e-6));
    CHECK(std::abs(r.objective - oracle) <= 1e-3);
  }
}

TEST_CASE("solve_relaxation matches 0.02 grid on n=4, p=2, k=2") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const DesignMatrix x = random_design(4, 2, 600 + s);
    const RelaxationResult r = solve_relaxation(x, 2, SamplingMode::WithoutReplacement);
    const double grid = testing::grid_min_n4(x, 2, 0.02);
    CHECK(r.objective <= grid + 1e-9);
    CHECK(grid - r.objective <= 1e-3 * grid);
  }
}

TEST_CASE("solve_relaxation satisfies KKT conditions") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const DesignMatrix x = random_design(40, 3, 700 + s);
    const int k = 10;
    const RelaxationResult r = solve_relaxation(x, k, SamplingMode::WithoutReplacement);
    const Vector g = gradient(r.weights, x);
    const Vector& pi = r.weights.values;
    // Interior coordinates share one gradient value; zeros sit above it and
    // capped coordinates below it. An integral optimum has no interior.
    const double inf = std::numeric_limits<double>::infinity();
    double lo = inf, hi = -inf, zero_min = inf, cap_max = -inf;
    for (Index i = 0; i < pi.size(); ++i) {
      if (pi(i) <= 1e-8) {
        zero_min = std::min(zero_min, g(i));
      } else if (pi(i) >= 1 - 1e-8) {
        cap_max = std::max(cap_max, g(i));
      } else if (pi(i) > 1e-4 && pi(i) < 1 - 1e-4) {
        lo = std::min(lo, g(i));
        hi = std::max(hi, g(i));
      }
    }
    const double tol = 1e-3 * g.cwiseAbs().maxCoeff();
    CHECK(cap_max <= zero_min + tol);
    if (std::isfinite(lo)) {
      CHECK(hi - lo <= tol);
      CHECK(zero_min >= lo - tol);
      CHECK(cap_max <= hi + tol);
    }
  }
}

TEST_CASE("relaxation properties on random instances") {
  for (std::uint64_t s = 0; s < 25; ++s) {
    const Index n = 20 + static_cast<Index>(s * 3);
    const Index p = 2 + static_cast<Index>(s % 5);
    const int k = static_cast<int>(p) + 1 + static_cast<int>(s % 7);
    const auto mode = s % 2 ? SamplingMode::WithReplacement : SamplingMode::WithoutReplacement;
    const DesignMatrix x = random_design(n, p, 800 + s);
    const RelaxationResult r = solve_relaxation(x, k, mode);

    CHECK(r.weights.feasible());
    CHECK(r.weights.values.sum() == doctest::Approx(k).epsilon(1e-6 / k));
    CHECK(r.trace.monotone());
    const Vector flat = Vector::Constant(n, static_cast<double>(k) / n);
    CHECK(r.objective <= objective(flat, x));
    CHECK(r.objective == doctest::Approx(objective(r.weights, x)));
  }
}

TEST_CASE("literal step schedule also converges") {
  SolverConfig cfg;
  cfg.adaptive_step = false;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const DesignMatrix x = random_design(30, 3, 900 + s);
    const RelaxationResult a = solve_relaxation(x, 8, SamplingMode::WithoutReplacement, cfg);
    const RelaxationResult b = solve_relaxation(x, 8, SamplingMode::WithoutReplacement);
    CHECK(a.trace.monotone());
    CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-4));
  }
}

TEST_CASE("objective decreases strictly when weights grow") {
  Rng rng(31);
  for (std::uint64_t s = 0; s < 30; ++s) {
    const DesignMatrix x = random_design(12, 3, 1000 + s);
    const Vector pi = testing::random_uniform_vector(12, 0.1, 0.5, rng);
    Vector bigger = pi;
    bigger(static_cast<Index>(uniform_index(rng, 12))) += 0.3;
    CHECK(objective(pi, x) > objective(bigger, x));
  }
}

TEST_CASE("certificate lower-bounds every subset on n=8, p=2, k=3") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const DesignMatrix x = random_design(8, 2, 1100 + s);
    const double cert = minimax_certificate(x, 3, SamplingMode::WithoutReplacement);
    CHECK(cert <= testing::exhaustive_best(x, 3) * (1 + 1e-9));
  }
}

TEST_CASE("support thresholding") {
  WeightVector w{vec({0.0, 1e-9, 0.5, 1.0}), 1.5, true};
  CHECK(support_threshold(1.5, 4) == doctest::Approx(1e-6 * 1.5 / 4));
  const auto s = support(w);
  REQUIRE(s.size() == 2);
  CHECK(s[0] == 2);
  CHECK(s[1] == 3);
}

TEST_CASE("support size bound on continuous designs") {
  for (const Index p : {3, 5, 8}) {
    for (std::uint64_t s = 0; s < 4; ++s) {
      const DesignMatrix x = random_design(200, p, 1200 + 10 * p + s);
      const int k = 3 * static_cast<int>(p);
      const RelaxationResult r = solve_relaxation(x, k, SamplingMode::WithoutReplacement);
      const std::size_t bound = static_cast<std::size_t>(k + p * (p + 1) / 2);
      CHECK(support(r.weights).size() <= bound);
      CHECK(support(r.weights).size() >= static_cast<std::size_t>(k));
    }
  }
}
