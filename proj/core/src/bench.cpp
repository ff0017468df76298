#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "optsel/bench.hpp"

#ifndef OPTSEL_VERSION
#define OPTSEL_VERSION "0.0.0"
#endif

namespace optsel {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested;
  if (n == 0) {
    if (const char* env = std::getenv("OPTSEL_THREADS")) {
      const int v = std::atoi(env);
      if (v > 0) n = static_cast<unsigned>(v);
    }
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

template <class Fn>
void parallel_for(std::size_t jobs, unsigned workers, Fn&& fn) {
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < jobs; i = next++) fn(i);
    });
  }
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// One selection outcome; `ok` is false when the selector itself failed.
struct Picked {
  bool ok = false;
  Selection sel;
  double seconds = 0.0;
};

struct TrialResult {
  double objective = kInf;
  double mse_ratio = kInf;
  double delta_norm = kInf;
  std::vector<double> coef_error;
  double seconds = 0.0;
  bool failed = true;
};

struct BudgetCache {
  std::optional<RelaxationResult> sampling_relax;
  std::optional<SamplingDistributions> dists;
  Picked greedy;
  Picked fedorov;
};

}  // namespace

std::string library_version() { return OPTSEL_VERSION; }

std::string method_name(Method m) {
  switch (m) {
    case Method::Uniform: return "uniform";
    case Method::LeverageScore: return "leverage";
    case Method::PredictiveLength: return "plength";
    case Method::SamplingHard: return "sampling-hard";
    case Method::Greedy: return "greedy";
    case Method::Fedorov: return "fedorov";
    case Method::SamplingSoft: return "sampling-soft";
  }
  return "unknown";
}

std::string method_label(Method m) {
  switch (m) {
    case Method::Uniform: return "L1";
    case Method::LeverageScore: return "L2";
    case Method::PredictiveLength: return "L3";
    case Method::SamplingHard: return "L4*";
    case Method::Greedy: return "L5*";
    case Method::Fedorov: return "L6";
    case Method::SamplingSoft: return "L4*soft";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& name) {
  for (const Method m : {Method::Uniform, Method::LeverageScore, Method::PredictiveLength,
                         Method::SamplingHard, Method::Greedy, Method::Fedorov,
                         Method::SamplingSoft}) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

bool method_is_randomized(Method m) {
  return m != Method::Greedy && m != Method::Fedorov;
}

const std::vector<Method>& benchmark_methods() {
  static const std::vector<Method> methods = {Method::Uniform,      Method::LeverageScore,
                                              Method::PredictiveLength, Method::SamplingHard,
                                              Method::Greedy,       Method::Fedorov};
  return methods;
}

double eval_objective(const DesignMatrix& x, const Selection& sel) {
  return trace_inverse(SpdMatrix(selection_gram(x, sel)));
}

Stats summarize(std::vector<double> values) {
  Stats s;
  if (values.empty()) {
    s.median = s.q1 = s.q3 = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    if (lo == hi || values[lo] == values[hi]) return values[lo];
    if (std::isinf(values[hi])) return values[hi];
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
  };
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  return s;
}

const BenchmarkCell* BenchmarkReport::find(const std::string& method, int k) const {
  for (const auto& c : cells) {
    if (c.method == method && c.k == k) return &c;
  }
  return nullptr;
}

BenchmarkReport run_benchmark_on(const DesignMatrix& x, const std::optional<Vector>& beta0,
                                 const BenchmarkOptions& opts, BenchmarkMeta meta) {
  if (opts.trials <= 0) throw Error(ErrorCode::InvalidArgument, "trials must be positive");
  if (opts.budgets.empty()) throw Error(ErrorCode::InvalidArgument, "no budgets given");
  if (opts.methods.empty()) throw Error(ErrorCode::InvalidArgument, "no methods given");
  if (!(opts.sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be >= 0");
  const Index n = x.rows();
  const Index p = x.cols();
  for (const int k : opts.budgets) {
    if (k < p) {
      throw Error(ErrorCode::InvalidArgument,
                  "budget " + std::to_string(k) + " is below p=" + std::to_string(p));
    }
  }
  if (beta0 && beta0->size() != p) {
    throw Error(ErrorCode::InvalidArgument, "beta0 has wrong length");
  }

  const std::uint64_t master = opts.master_seed;
  auto uses = [&](Method m) {
    return std::find(opts.methods.begin(), opts.methods.end(), m) != opts.methods.end();
  };
  const bool need_sampling = uses(Method::SamplingHard) || uses(Method::SamplingSoft);

  // Per-budget deterministic work: relaxation, greedy and exchange selections.
  std::vector<BudgetCache> cache(opts.budgets.size());
  for (std::size_t b = 0; b < opts.budgets.size(); ++b) {
    const int k = opts.budgets[b];
    auto& c = cache[b];
    const bool wor_fits = k <= n;
    std::optional<RelaxationResult> wor_relax;
    double wor_seconds = 0.0;
    if ((uses(Method::Greedy) || (need_sampling && opts.mode == SamplingMode::WithoutReplacement)) &&
        wor_fits) {
      const auto start = Clock::now();
      try {
        wor_relax = solve_relaxation(x, k, SamplingMode::WithoutReplacement, opts.solver);
      } catch (const Error&) {
      }
      wor_seconds = seconds_since(start);
    }
    if (need_sampling) {
      if (opts.mode == SamplingMode::WithoutReplacement) {
        c.sampling_relax = wor_relax;
      } else {
        try {
          c.sampling_relax = solve_relaxation(x, k, SamplingMode::WithReplacement, opts.solver);
        } catch (const Error&) {
        }
      }
      if (c.sampling_relax) {
        try {
          c.dists = build_distributions(c.sampling_relax->weights, x);
        } catch (const Error&) {
        }
      }
    }
    if (uses(Method::Greedy) && wor_relax) {
      const auto start = Clock::now();
      try {
        c.greedy.sel = greedy_from_relaxation(x, wor_relax->weights, k);
        c.greedy.ok = true;
      } catch (const Error&) {
      }
      c.greedy.seconds = wor_seconds + seconds_since(start);
    }
    if (uses(Method::Fedorov) && wor_fits) {
      const auto start = Clock::now();
      for (std::uint64_t attempt = 0; attempt < 10 && !c.fedorov.ok; ++attempt) {
        const auto seed = derive_seed(master, 0xFED, static_cast<std::uint64_t>(k), attempt);
        try {
          const Selection init = Selection::from_indices(random_subset(n, k, seed), k);
          c.fedorov.sel = fedorov_exchange(x, k, init, opts.fedorov_max_exchanges, seed);
          c.fedorov.ok = true;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::RankCollapse) break;
        }
      }
      c.fedorov.seconds = seconds_since(start);
    }
  }

  const std::size_t n_cells = opts.budgets.size() * opts.methods.size();
  const auto trials = static_cast<std::size_t>(opts.trials);
  std::vector<std::vector<TrialResult>> results(n_cells, std::vector<TrialResult>(trials));

  Selection everything;
  everything.indices.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) everything.indices[static_cast<std::size_t>(i)] = i;
  everything.multiplicities.assign(static_cast<std::size_t>(n), 1);

  auto run_trial = [&](std::size_t t) {
    Rng rng(derive_seed(master, 1, t));
    Vector b0(p);
    if (beta0) {
      b0 = *beta0;
    } else {
      for (Index j = 0; j < p; ++j) b0(j) = standard_normal(rng);
    }
    Vector y_full = x * b0;
    for (Index i = 0; i < n; ++i) y_full(i) += opts.sigma * standard_normal(rng);
    double ols_err = kInf;
    try {
      ols_err = (subset_ols(x, everything, y_full) - b0).squaredNorm();
    } catch (const Error&) {
    }

    for (std::size_t b = 0; b < opts.budgets.size(); ++b) {
      const int k = opts.budgets[b];
      const auto& c = cache[b];
      for (std::size_t mi = 0; mi < opts.methods.size(); ++mi) {
        const Method m = opts.methods[mi];
        const std::uint64_t sel_seed =
            derive_seed(master, 2 + static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(k), t);
        Picked pick;
        const auto start = Clock::now();
        try {
          switch (m) {
            case Method::Uniform:
              pick.sel = baseline_sample(x, k, BaselineMethod::Uniform, sel_seed);
              pick.ok = true;
              break;
            case Method::LeverageScore:
              pick.sel = baseline_sample(x, k, BaselineMethod::LeverageScore, sel_seed);
              pick.ok = true;
              break;
            case Method::PredictiveLength:
              pick.sel = baseline_sample(x, k, BaselineMethod::PredictiveLength, sel_seed);
              pick.ok = true;
              break;
            case Method::SamplingHard:
            case Method::SamplingSoft:
              if (c.dists) {
                pick.sel = m == Method::SamplingHard
                               ? sample_hard(*c.dists, c.sampling_relax->weights, k, opts.mode, sel_seed)
                               : sample_soft(*c.dists, c.sampling_relax->weights, k, opts.mode, sel_seed);
                pick.ok = true;
              }
              break;
            case Method::Greedy:
            case Method::Fedorov:
              break;
          }
        } catch (const Error&) {
          pick.ok = false;
        }
        pick.seconds = seconds_since(start);
        if (m == Method::Greedy) pick = c.greedy;
        if (m == Method::Fedorov) pick = c.fedorov;

        TrialResult r;
        r.seconds = opts.record_timing ? pick.seconds : 0.0;
        if (pick.ok) {
          try {
            r.objective = eval_objective(x, pick.sel);
          } catch (const Error&) {
          }
          Rng dup(derive_seed(master, 3, t, b * 64 + mi));
          Vector y(pick.sel.total_count());
          Index at = 0;
          for (std::size_t s = 0; s < pick.sel.indices.size(); ++s) {
            const Index i = pick.sel.indices[s];
            y(at++) = y_full(i);
            for (int extra = 1; extra < pick.sel.multiplicities[s]; ++extra) {
              y(at++) = x.row(i).dot(b0) + opts.sigma * standard_normal(dup);
            }
          }
          try {
            const Vector est = subset_ols(x, pick.sel, y);
            const Vector diff = est - b0;
            const double err = diff.squaredNorm();
            r.delta_norm = std::sqrt(err);
            r.coef_error.assign(diff.data(), diff.data() + diff.size());
            for (double& v : r.coef_error) v = std::abs(v);
            if (ols_err > 0.0) {
              r.mse_ratio = err / ols_err;
            } else {
              r.mse_ratio = err == 0.0 ? 1.0 : kInf;
            }
            r.failed = !std::isfinite(r.objective);
          } catch (const Error&) {
          }
        }
        if (r.coef_error.empty()) r.coef_error.assign(static_cast<std::size_t>(p), kInf);
        results[b * opts.methods.size() + mi][t] = std::move(r);
      }
    }
  };
  parallel_for(trials, worker_count(opts.threads, trials), run_trial);

  BenchmarkReport report;
  report.meta = std::move(meta);
  report.meta.version = library_version();
  report.meta.master_seed = master;
  report.meta.trials = opts.trials;
  report.meta.sigma = opts.sigma;
  report.meta.mode = std::string(to_string(opts.mode));
  report.meta.n = n;
  report.meta.p = p;
  for (std::size_t b = 0; b < opts.budgets.size(); ++b) {
    for (std::size_t mi = 0; mi < opts.methods.size(); ++mi) {
      const auto& rs = results[b * opts.methods.size() + mi];
      BenchmarkCell cell;
      cell.method = method_name(opts.methods[mi]);
      cell.k = opts.budgets[b];
      cell.trials = opts.trials;
      std::vector<double> f, ratio, delta, secs;
      for (const auto& r : rs) {
        f.push_back(r.objective);
        ratio.push_back(r.mse_ratio);
        delta.push_back(r.delta_norm);
        secs.push_back(r.seconds);
        if (r.failed) ++cell.failures;
      }
      cell.objective = summarize(f);
      cell.mse_ratio = summarize(ratio);
      cell.delta_norm = summarize(delta);
      cell.wall_time = summarize(secs);
      for (Index j = 0; j < p; ++j) {
        std::vector<double> col;
        for (const auto& r : rs) col.push_back(r.coef_error[static_cast<std::size_t>(j)]);
        cell.coef_abs_error_median.push_back(summarize(col).median);
      }
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

BenchmarkReport run_benchmark(const DesignSpec& spec, const BenchmarkOptions& opts) {
  const DesignMatrix x = generate_design(spec);
  BenchmarkMeta meta;
  meta.design = spec.label();
  meta.design_seed = spec.seed;
  if (spec.kind == DesignKind::HeavyTailT) {
    meta.notes.push_back("t-distributed entries are unit scale and not standardized");
  }
  if (spec.kind == DesignKind::Fixture && spec.fixture == "cpu") {
    return run_benchmark_on(x, cpu_fixture().beta0, opts, std::move(meta));
  }
  meta.notes.push_back("beta0 drawn per trial from N(0, I)");
  return run_benchmark_on(x, std::nullopt, opts, std::move(meta));
}

BenchmarkReport cpu_fixture_eval(const std::vector<int>& budgets, int trials,
                                 std::uint64_t master_seed, bool record_timing) {
  BenchmarkOptions opts;
  opts.budgets = budgets;
  opts.trials = trials;
  opts.sigma = 1.0;
  opts.master_seed = master_seed;
  opts.record_timing = record_timing;
  BenchmarkMeta meta;
  meta.design = "cpu";
  meta.notes.push_back("beta0 = (0.49, 0.30, 0.19, 3.78), unit Gaussian noise");
  return run_benchmark_on(cpu_fixture().x, cpu_fixture().beta0, opts, std::move(meta));
}

std::vector<SupportPoint> support_study(const DesignSpec& base, const std::vector<int>& ps,
                                        int k_factor, const SolverConfig& cfg) {
  std::vector<SupportPoint> out;
  for (const int p : ps) {
    DesignSpec spec = base;
    spec.p = p;
    spec.seed = derive_seed(base.seed, static_cast<std::uint64_t>(p));
    const DesignMatrix x = generate_design(spec);
    const int k = k_factor * p;
    const RelaxationResult relax = solve_relaxation(x, k, SamplingMode::WithoutReplacement, cfg);
    SupportPoint pt;
    pt.p = p;
    pt.k = k;
    pt.n = x.rows();
    pt.support = support(relax.weights).size();
    pt.excess = static_cast<std::ptrdiff_t>(pt.support) - k;
    pt.bound = static_cast<std::size_t>(k) + static_cast<std::size_t>(p * (p + 1) / 2);
    pt.iterations = static_cast<int>(relax.trace.iterations.size()) - 1;
    pt.converged = relax.trace.status == SolverStatus::Converged;
    out.push_back(pt);
  }
  return out;
}

std::vector<double> fit_quadratic(const std::vector<SupportPoint>& points) {
  if (points.size() < 3) {
    throw Error(ErrorCode::InvalidArgument, "fit_quadratic: need at least three points");
  }
  Matrix a(static_cast<Index>(points.size()), 3);
  Vector y(static_cast<Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double p = static_cast<double>(points[i].p);
    const auto r = static_cast<Index>(i);
    a(r, 0) = 1.0;
    a(r, 1) = p;
    a(r, 2) = p * p;
    y(r) = static_cast<double>(points[i].excess);
  }
  const Vector c = a.colPivHouseholderQr().solve(y);
  return {c(0), c(1), c(2)};
}

}  // namespace optsel
