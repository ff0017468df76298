#include "cli/commands.hpp"

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cli/csv.hpp"
#include "json.hpp"
#include "optsel/bench.hpp"
#include "optsel/errors.hpp"
#include "optsel/relaxation.hpp"
#include "optsel/report_io.hpp"
#include "optsel/selectors.hpp"
#include "optsel/transforms.hpp"

namespace optsel::cli {
namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "NaN" : (v > 0 ? "Infinity" : "-Infinity");
}

const std::map<std::string, SamplingMode> kModes = {
    {"with-rep", SamplingMode::WithReplacement},
    {"without-rep", SamplingMode::WithoutReplacement},
};

const std::map<std::string, GlmFamily> kFamilies = {
    {"logistic", GlmFamily::Logistic},
    {"poisson", GlmFamily::Poisson},
};

std::vector<std::string> method_names() {
  std::vector<std::string> names;
  for (const Method m : {Method::SamplingSoft, Method::SamplingHard, Method::Greedy,
                         Method::Fedorov, Method::Uniform, Method::LeverageScore,
                         Method::PredictiveLength}) {
    names.push_back(method_name(m));
  }
  return names;
}

std::filesystem::path sidecar_path(const std::filesystem::path& out) {
  auto p = out;
  p.replace_extension(".json");
  if (p == out) p += ".json";
  return p;
}

Vector flatten(const DesignMatrix& m) {
  Vector v(m.size());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  }
  return v;
}

std::vector<int> budget_list(const std::string& text) {
  try {
    return parse_budgets(text);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

// --------------------------------------------------------------------------

struct SolveArgs {
  std::string design;
  int k = 0;
  std::string mode = "without-rep";
  std::string out;
};

int run_solve(const SolveArgs& a, std::ostream& out) {
  const DesignMatrix x = ingest_csv(a.design);
  const RelaxationResult r = solve_relaxation(x, a.k, kModes.at(a.mode));
  const std::string csv = weights_csv(r.weights);
  if (a.out.empty()) {
    out << csv;
  } else {
    write_text(a.out, csv);
  }
  Json j;
  j["objective"] = number(r.objective);
  j["k"] = a.k;
  j["mode"] = a.mode;
  j["weight_sum"] = number(r.weights.values.sum());
  j["support"] = support(r.weights).size();
  j["iterations"] = r.trace.iterations.size();
  j["converged"] = r.trace.status == SolverStatus::Converged;
  if (!a.out.empty()) out << dump_json17(j);
  return kExitOk;
}

// --------------------------------------------------------------------------

struct CertificateArgs {
  std::string design;
  int k = 0;
  std::string mode = "without-rep";
};

int run_certificate(const CertificateArgs& a, std::ostream& out) {
  const DesignMatrix x = ingest_csv(a.design);
  Json j;
  j["certificate"] = number(minimax_certificate(x, a.k, kModes.at(a.mode)));
  j["k"] = a.k;
  j["mode"] = a.mode;
  out << dump_json17(j);
  return kExitOk;
}

// --------------------------------------------------------------------------

struct SelectArgs {
  std::string design;
  int k = 0;
  std::string method = "greedy";
  std::string mode = "without-rep";
  std::optional<std::uint64_t> seed;
  std::string glm;
  std::string pilot;
  std::string predict_on;
  std::string out;
  bool strict_repro = false;
  int max_exchanges = 5000;
};

Selection select_rows(const DesignMatrix& x, const SelectArgs& a, Method method,
                      SamplingMode mode, std::uint64_t seed) {
  switch (method) {
    case Method::SamplingSoft:
    case Method::SamplingHard: {
      const RelaxationResult r = solve_relaxation(x, a.k, mode);
      const SamplingDistributions d = build_distributions(r.weights, x);
      return method == Method::SamplingSoft ? sample_soft(d, r.weights, a.k, mode, seed)
                                            : sample_hard(d, r.weights, a.k, mode, seed);
    }
    case Method::Greedy:
      return greedy_select(x, a.k);
    case Method::Fedorov: {
      const Selection init =
          Selection::from_indices(random_subset(x.rows(), a.k, derive_seed(seed, 0xFED)), a.k);
      return fedorov_exchange(x, a.k, init, a.max_exchanges, seed);
    }
    case Method::Uniform:
      return baseline_sample(x, a.k, BaselineMethod::Uniform, seed);
    case Method::LeverageScore:
      return baseline_sample(x, a.k, BaselineMethod::LeverageScore, seed);
    case Method::PredictiveLength:
      return baseline_sample(x, a.k, BaselineMethod::PredictiveLength, seed);
  }
  throw UsageError("unknown method");
}

int run_select(const SelectArgs& a, std::ostream& out, std::ostream& err) {
  const Method method = *parse_method(a.method);
  const SamplingMode mode = kModes.at(a.mode);
  if (a.strict_repro && method_is_randomized(method) && !a.seed) {
    throw UsageError("--strict-repro requires --seed for method " + a.method);
  }
  if (!a.glm.empty() && a.pilot.empty()) throw UsageError("--glm requires --pilot");
  if (a.glm.empty() && !a.pilot.empty()) throw UsageError("--pilot requires --glm");
  const std::uint64_t seed = a.seed.value_or(0);

  Json j;
  j["method"] = a.method;
  j["mode"] = a.mode;
  j["k"] = a.k;
  if (a.seed) j["seed"] = *a.seed;

  const auto write_sidecar = [&] {
    const std::string doc = dump_json17(j);
    if (a.out.empty()) {
      out << doc;
    } else {
      write_text(sidecar_path(a.out), doc);
    }
  };

  try {
    DesignMatrix x = ingest_csv(a.design);
    if (!a.glm.empty()) {
      const Vector beta = flatten(ingest_csv(a.pilot));
      if (beta.size() != x.cols()) {
        throw UsageError("pilot has " + std::to_string(beta.size()) + " entries, design has " +
                         std::to_string(x.cols()) + " columns");
      }
      x = glm_transform(x, GlmSpec{kFamilies.at(a.glm), beta});
    }
    if (!a.predict_on.empty()) {
      const DesignMatrix z = ingest_csv(a.predict_on);
      if (z.cols() != x.cols()) throw UsageError("--predict-on column count differs from design");
      x = prediction_transform(x, z);
    }

    const auto start = std::chrono::steady_clock::now();
    const Selection sel = select_rows(x, a, method, mode, seed);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const double f = eval_objective(x, sel);
    const long count = sel.total_count();
    const int k_eff = static_cast<int>(std::max<long>(a.k, count));
    const double cert = minimax_certificate(x, k_eff, sel.mode);

    if (!a.out.empty()) write_text(a.out, selection_csv(sel));
    j["objective"] = number(f);
    j["certificate"] = number(cert);
    j["certificate_k"] = k_eff;
    j["ratio"] = number(f / cert);
    j["selected"] = count;
    j["distinct"] = sel.size();
    j["wall_time"] = number(a.strict_repro ? 0.0 : wall);
    Json idx = Json::array();
    for (const Index i : sel.indices) idx.push_back(i);
    j["indices"] = std::move(idx);
    Json mult = Json::array();
    for (const int m : sel.multiplicities) mult.push_back(m);
    j["multiplicities"] = std::move(mult);
    write_sidecar();
    return kExitOk;
  } catch (const Error& e) {
    if (!e.is_numerical()) throw;
    j["error"] = std::string(to_string(e.code()));
    j["message"] = e.what();
    write_sidecar();
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

// --------------------------------------------------------------------------

struct BenchArgs {
  std::string spec;
  Index n = 1000;
  Index p = 50;
  std::string budgets;
  int trials = 20;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string methods;
  double sigma = 1.0;
  std::string mode = "without-rep";
  bool strict_repro = false;
  int max_exchanges = 5000;
};

void emit_report(const BenchmarkReport& report, const std::string& path, std::ostream& out) {
  if (!path.empty()) write_text(path, report_to_json(report));
  out << report_table(report);
}

int run_benchmark_cmd(const BenchArgs& a, std::ostream& out) {
  if (a.trials < 1) throw UsageError("--trials must be at least 1");
  if (a.strict_repro && !a.seed) throw UsageError("--strict-repro requires --seed");
  DesignSpec spec;
  try {
    spec = DesignSpec::parse(a.spec);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const std::uint64_t seed = a.seed.value_or(0);
  spec.n = a.n;
  spec.p = a.p;
  spec.seed = derive_seed(seed, 0xD);

  BenchmarkOptions opts;
  opts.budgets = budget_list(a.budgets);
  opts.trials = a.trials;
  opts.sigma = a.sigma;
  opts.master_seed = seed;
  opts.mode = kModes.at(a.mode);
  opts.fedorov_max_exchanges = a.max_exchanges;
  opts.record_timing = !a.strict_repro;
  if (!a.methods.empty()) {
    opts.methods.clear();
    std::stringstream ss(a.methods);
    std::string name;
    while (std::getline(ss, name, ',')) {
      const auto m = parse_method(name);
      if (!m) throw UsageError("unknown method '" + name + "'");
      opts.methods.push_back(*m);
    }
  }
  emit_report(run_benchmark(spec, opts), a.out, out);
  return kExitOk;
}

struct CpuArgs {
  std::string budgets = "20,30,50,75";
  int trials = 100;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool strict_repro = false;
};

int run_cpu_bench(const CpuArgs& a, std::ostream& out) {
  if (a.trials < 1) throw UsageError("--trials must be at least 1");
  if (a.strict_repro && !a.seed) throw UsageError("--strict-repro requires --seed");
  const auto report =
      cpu_fixture_eval(budget_list(a.budgets), a.trials, a.seed.value_or(0), !a.strict_repro);
  emit_report(report, a.out, out);
  return kExitOk;
}

// --------------------------------------------------------------------------

struct SupportArgs {
  std::string spec = "skewed:0";
  Index n = 1000;
  std::string p_values = "10:50:5";
  int k_factor = 3;
  std::uint64_t seed = 0;
  std::string out;
};

int run_support_study(const SupportArgs& a, std::ostream& out) {
  DesignSpec spec;
  try {
    spec = DesignSpec::parse(a.spec);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (spec.kind == DesignKind::Fixture) throw UsageError("support-study needs a synthetic --spec");
  if (a.k_factor < 1) throw UsageError("--k-factor must be at least 1");
  spec.n = a.n;
  spec.seed = a.seed;
  const auto points = support_study(spec, budget_list(a.p_values), a.k_factor);

  std::string csv = "p,k,n,support,excess,bound,iterations,converged\n";
  for (const auto& pt : points) {
    csv += std::to_string(pt.p) + "," + std::to_string(pt.k) + "," + std::to_string(pt.n) + "," +
           std::to_string(pt.support) + "," + std::to_string(pt.excess) + "," +
           std::to_string(pt.bound) + "," + std::to_string(pt.iterations) + "," +
           (pt.converged ? "1" : "0") + "\n";
  }
  if (!a.out.empty()) write_text(a.out, csv);
  out << csv;
  if (points.size() >= 3) {
    const auto c = fit_quadratic(points);
    out << "fit excess = " << c[0] << " + " << c[1] << " p + " << c[2] << " p^2\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Near A-optimal subset selection for linear regression", "optsel"};
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1);

  const auto modes = CLI::IsMember(kModes);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve the continuous relaxation");
  solve_cmd->add_option("--design", solve.design, "Design CSV")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--k", solve.k, "Budget")->required()->check(CLI::PositiveNumber);
  solve_cmd->add_option("--mode", solve.mode)->check(modes)->capture_default_str();
  solve_cmd->add_option("--out", solve.out, "Weights CSV (stdout if omitted)");

  CertificateArgs cert;
  auto* cert_cmd = app.add_subcommand("certificate", "Print the minimax lower bound f*(k; X)");
  cert_cmd->add_option("--design", cert.design, "Design CSV")->required()->check(CLI::ExistingFile);
  cert_cmd->add_option("--k", cert.k, "Budget")->required()->check(CLI::PositiveNumber);
  cert_cmd->add_option("--mode", cert.mode)->check(modes)->capture_default_str();

  SelectArgs sel;
  auto* sel_cmd = app.add_subcommand("select", "Select k design points");
  sel_cmd->add_option("--design", sel.design, "Design CSV")->required()->check(CLI::ExistingFile);
  sel_cmd->add_option("--k", sel.k, "Budget")->required()->check(CLI::PositiveNumber);
  sel_cmd->add_option("--method", sel.method)
      ->check(CLI::IsMember(method_names()))
      ->capture_default_str();
  sel_cmd->add_option("--mode", sel.mode)->check(modes)->capture_default_str();
  sel_cmd->add_option("--seed", sel.seed, "Seed for randomized methods");
  sel_cmd->add_option("--glm", sel.glm, "GLM family")->check(CLI::IsMember(kFamilies));
  sel_cmd->add_option("--pilot", sel.pilot, "Pilot coefficient CSV")->check(CLI::ExistingFile);
  sel_cmd->add_option("--predict-on", sel.predict_on, "Prediction design CSV")
      ->check(CLI::ExistingFile);
  sel_cmd->add_option("--out", sel.out, "Selection CSV; the sidecar gets a .json extension");
  sel_cmd->add_option("--max-exchanges", sel.max_exchanges)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sel_cmd->add_flag("--strict-repro", sel.strict_repro, "Zero timings and require --seed");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("benchmark", "Synthetic benchmark sweep");
  bench_cmd->add_option("--spec", bench.spec, "skewed:<alpha>, t:<df> or cpu")->required();
  bench_cmd->add_option("--n", bench.n)->check(CLI::PositiveNumber)->capture_default_str();
  bench_cmd->add_option("--p", bench.p)->check(CLI::PositiveNumber)->capture_default_str();
  bench_cmd->add_option("--budgets", bench.budgets, "a,b,c or start:stop:step")->required();
  bench_cmd->add_option("--trials", bench.trials)->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed);
  bench_cmd->add_option("--out", bench.out, "Report JSON");
  bench_cmd->add_option("--methods", bench.methods, "Comma-separated method names");
  bench_cmd->add_option("--sigma", bench.sigma)->check(CLI::PositiveNumber)->capture_default_str();
  bench_cmd->add_option("--mode", bench.mode)->check(modes)->capture_default_str();
  bench_cmd->add_option("--max-exchanges", bench.max_exchanges)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_flag("--strict-repro", bench.strict_repro, "Zero timings and require --seed");

  CpuArgs cpu;
  auto* cpu_cmd = app.add_subcommand("cpu-bench", "Benchmark on the embedded CPU data");
  cpu_cmd->add_option("--budgets", cpu.budgets)->capture_default_str();
  cpu_cmd->add_option("--trials", cpu.trials)->capture_default_str();
  cpu_cmd->add_option("--seed", cpu.seed);
  cpu_cmd->add_option("--out", cpu.out, "Report JSON");
  cpu_cmd->add_flag("--strict-repro", cpu.strict_repro, "Zero timings and require --seed");

  SupportArgs sup;
  auto* sup_cmd = app.add_subcommand("support-study", "Support size of the relaxed optimum");
  sup_cmd->add_option("--spec", sup.spec)->capture_default_str();
  sup_cmd->add_option("--n", sup.n)->check(CLI::PositiveNumber)->capture_default_str();
  sup_cmd->add_option("--p-values", sup.p_values)->capture_default_str();
  sup_cmd->add_option("--k-factor", sup.k_factor)->capture_default_str();
  sup_cmd->add_option("--seed", sup.seed)->capture_default_str();
  sup_cmd->add_option("--out", sup.out, "CSV output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*solve_cmd) return run_solve(solve, out);
    if (*cert_cmd) return run_certificate(cert, out);
    if (*sel_cmd) return run_select(sel, out, err);
    if (*bench_cmd) return run_benchmark_cmd(bench, out);
    if (*cpu_cmd) return run_cpu_bench(cpu, out);
    if (*sup_cmd) return run_support_study(sup, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return e.is_numerical() ? kExitNumerical : kExitUsage;
  }
  return kExitUsage;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("optsel");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace optsel::cli
