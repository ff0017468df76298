#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "optsel/relaxation.hpp"
#include "optsel/selectors.hpp"
#include "optsel/types.hpp"

namespace optsel {

// ---------------------------------------------------------------------------
// Synthetic designs and fixtures

enum class DesignKind { SkewedGaussian, HeavyTailT, Fixture };

struct DesignSpec {
  DesignKind kind = DesignKind::SkewedGaussian;
  double alpha = 0.0;      // SkewedGaussian: lambda_j = j^{-alpha}
  int df = 3;              // HeavyTailT: degrees of freedom
  std::string fixture;     // Fixture: name, currently "cpu"
  Index n = 0;
  Index p = 0;
  std::uint64_t seed = 0;

  /// "skewed:<alpha>", "t:<df>" or "cpu".
  std::string label() const;
  /// Parses label() output. n, p and seed are left untouched.
  static DesignSpec parse(const std::string& text);
};

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// signs of R's diagonal folded into Q.
Matrix haar_orthogonal(Index p, Rng& rng);

/// Rows i.i.d. N(0, U diag(j^{-alpha}) U^T), or i.i.d. unit-scale t(df)
/// entries, or the named fixture (n and p are then taken from the fixture).
/// Deterministic given spec.seed.
DesignMatrix generate_design(const DesignSpec& spec);

/// The 209-machine CPU performance pool: average main memory (MB), cache
/// (KB), average channel count and an intercept column, with the published
/// coefficients (0.49, 0.30, 0.19, 3.78).
struct CpuFixture {
  DesignMatrix x;
  Vector beta0;
};
const CpuFixture& cpu_fixture();

// ---------------------------------------------------------------------------
// Methods and metrics

enum class Method {
  Uniform,           // L1
  LeverageScore,     // L2
  PredictiveLength,  // L3
  SamplingHard,      // L4*
  Greedy,            // L5*
  Fedorov,           // L6
  SamplingSoft,
};

std::string method_name(Method m);          // CLI spelling, e.g. "greedy"
std::string method_label(Method m);         // "L5*"
std::optional<Method> parse_method(const std::string& name);
bool method_is_randomized(Method m);
const std::vector<Method>& benchmark_methods();  // L1..L6

/// F(S; X) = tr[(X_S^T X_S)^{-1}] with duplicates counted. Throws
/// SingularMatrix.
double eval_objective(const DesignMatrix& x, const Selection& sel);

struct Stats {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

/// Median and quartiles with linear interpolation between order
/// statistics. +inf entries sort last.
Stats summarize(std::vector<double> values);

struct BenchmarkCell {
  std::string method;
  int k = 0;
  Stats objective;
  Stats mse_ratio;    // ||b - b0||^2 / ||b_ols - b0||^2
  Stats delta_norm;   // ||b - b0||_2
  std::vector<double> coef_abs_error_median;
  Stats wall_time;    // seconds spent selecting
  int trials = 0;
  int failures = 0;
};

struct BenchmarkMeta {
  std::string version;
  std::string design;   // DesignSpec::label()
  Index n = 0;
  Index p = 0;
  std::uint64_t design_seed = 0;
  std::uint64_t master_seed = 0;
  int trials = 0;
  double sigma = 1.0;
  std::string mode;
  std::vector<std::string> notes;
};

struct BenchmarkReport {
  BenchmarkMeta meta;
  std::vector<BenchmarkCell> cells;

  const BenchmarkCell* find(const std::string& method, int k) const;
};

struct BenchmarkOptions {
  std::vector<Method> methods = benchmark_methods();
  std::vector<int> budgets;
  int trials = 20;
  double sigma = 1.0;
  std::uint64_t master_seed = 0;
  SamplingMode mode = SamplingMode::WithoutReplacement;
  int fedorov_max_exchanges = 5000;
  /// When false, wall_time cells are zero so reports are byte-reproducible.
  bool record_timing = true;
  /// Worker cap; 0 means OPTSEL_THREADS or hardware concurrency.
  unsigned threads = 0;
  SolverConfig solver;
};

/// Multi-trial sweep over budgets and methods on a fixed pool. Each trial
/// draws beta0 ~ N(0, I) (or uses `beta0` when given) and y = X beta0 +
/// sigma eps, with fresh noise for every repeated measurement. Deterministic
/// methods select once per budget. Failed selections become +inf cells.
BenchmarkReport run_benchmark_on(const DesignMatrix& x, const std::optional<Vector>& beta0,
                                 const BenchmarkOptions& opts, BenchmarkMeta meta);

/// Generates the design from `spec` and runs run_benchmark_on.
BenchmarkReport run_benchmark(const DesignSpec& spec, const BenchmarkOptions& opts);

/// All methods on the CPU fixture with its fixed coefficients and unit
/// noise, 100 repeats by default.
BenchmarkReport cpu_fixture_eval(const std::vector<int>& budgets, int trials = 100,
                                 std::uint64_t master_seed = 0, bool record_timing = true);

/// Parses "a,b,c" or "start:stop:step" (inclusive stop).
std::vector<int> parse_budgets(const std::string& text);

// ---------------------------------------------------------------------------
// Support size of the relaxation optimum

struct SupportPoint {
  Index p = 0;
  int k = 0;
  Index n = 0;
  std::size_t support = 0;
  std::ptrdiff_t excess = 0;   // support - k
  std::size_t bound = 0;       // k + p(p+1)/2
  int iterations = 0;
  bool converged = false;
};

/// For each p, generates a design from `base` with that p (seed derived
/// from base.seed and p), solves the without-replacement relaxation at
/// k = k_factor * p and records the thresholded support.
std::vector<SupportPoint> support_study(const DesignSpec& base, const std::vector<int>& ps,
                                        int k_factor = 3, const SolverConfig& cfg = {});

/// Least-squares fit excess ~ c0 + c1 p + c2 p^2; returns {c0, c1, c2}.
std::vector<double> fit_quadratic(const std::vector<SupportPoint>& points);

std::string library_version();

}  // namespace optsel
