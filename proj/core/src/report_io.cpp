#include "optsel/report_io.hpp"

#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace optsel {
namespace {

using Json = nlohmann::ordered_json;

Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "NaN";
  return v > 0 ? "Infinity" : "-Infinity";
}

double read_number(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "Infinity") return std::numeric_limits<double>::infinity();
    if (s == "-Infinity") return -std::numeric_limits<double>::infinity();
    if (s == "NaN") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error(ErrorCode::ParseError, "report: expected a number, got " + j.dump());
}

Json stats(const Stats& s) {
  Json j;
  j["median"] = number(s.median);
  j["q1"] = number(s.q1);
  j["q3"] = number(s.q3);
  return j;
}

Stats read_stats(const Json& j) {
  return {read_number(j.at("median")), read_number(j.at("q1")), read_number(j.at("q3"))};
}

}  // namespace

std::string report_to_json(const BenchmarkReport& report) {
  Json doc;
  Json meta;
  meta["version"] = report.meta.version;
  meta["design"] = report.meta.design;
  meta["n"] = report.meta.n;
  meta["p"] = report.meta.p;
  meta["design_seed"] = report.meta.design_seed;
  meta["master_seed"] = report.meta.master_seed;
  meta["trials"] = report.meta.trials;
  meta["sigma"] = number(report.meta.sigma);
  meta["mode"] = report.meta.mode;
  meta["notes"] = report.meta.notes;
  doc["meta"] = std::move(meta);

  Json cells = Json::array();
  for (const auto& c : report.cells) {
    Json cell;
    cell["method"] = c.method;
    cell["k"] = c.k;
    Json ts;
    ts["objective"] = stats(c.objective);
    ts["mse_ratio"] = stats(c.mse_ratio);
    ts["delta_norm"] = stats(c.delta_norm);
    Json coef = Json::array();
    for (const double v : c.coef_abs_error_median) coef.push_back(number(v));
    ts["coef_abs_error_median"] = std::move(coef);
    ts["wall_time"] = stats(c.wall_time);
    ts["trials"] = c.trials;
    ts["failures"] = c.failures;
    cell["trial_stats"] = std::move(ts);
    cells.push_back(std::move(cell));
  }
  doc["cells"] = std::move(cells);
  return dump_json17(doc);
}

BenchmarkReport report_from_json(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
  }
  BenchmarkReport r;
  try {
    const Json& meta = doc.at("meta");
    r.meta.version = meta.at("version").get<std::string>();
    r.meta.design = meta.at("design").get<std::string>();
    r.meta.n = meta.at("n").get<Index>();
    r.meta.p = meta.at("p").get<Index>();
    r.meta.design_seed = meta.at("design_seed").get<std::uint64_t>();
    r.meta.master_seed = meta.at("master_seed").get<std::uint64_t>();
    r.meta.trials = meta.at("trials").get<int>();
    r.meta.sigma = read_number(meta.at("sigma"));
    r.meta.mode = meta.at("mode").get<std::string>();
    r.meta.notes = meta.at("notes").get<std::vector<std::string>>();
    for (const Json& cell : doc.at("cells")) {
      BenchmarkCell c;
      c.method = cell.at("method").get<std::string>();
      c.k = cell.at("k").get<int>();
      const Json& ts = cell.at("trial_stats");
      c.objective = read_stats(ts.at("objective"));
      c.mse_ratio = read_stats(ts.at("mse_ratio"));
      c.delta_norm = read_stats(ts.at("delta_norm"));
      for (const Json& v : ts.at("coef_abs_error_median")) {
        c.coef_abs_error_median.push_back(read_number(v));
      }
      c.wall_time = read_stats(ts.at("wall_time"));
      c.trials = ts.at("trials").get<int>();
      c.failures = ts.at("failures").get<int>();
      r.cells.push_back(std::move(c));
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
  }
  return r;
}

std::string report_table(const BenchmarkReport& report) {
  std::ostringstream os;
  os << "design " << report.meta.design << "  n=" << report.meta.n << " p=" << report.meta.p
     << "  trials=" << report.meta.trials << "  (medians)\n";
  os << std::left << std::setw(15) << "method" << std::right << std::setw(7) << "k"
     << std::setw(15) << "F(S;X)" << std::setw(13) << "mse_ratio" << std::setw(13)
     << "|dbeta|_2" << std::setw(11) << "time_s" << std::setw(6) << "fail" << "\n";
  os << std::setprecision(5);
  for (const auto& c : report.cells) {
    os << std::left << std::setw(15) << c.method << std::right << std::setw(7) << c.k
       << std::setw(15) << c.objective.median << std::setw(13) << c.mse_ratio.median
       << std::setw(13) << c.delta_norm.median << std::setw(11) << c.wall_time.median
       << std::setw(6) << c.failures << "\n";
  }
  return os.str();
}

}  // namespace optsel
