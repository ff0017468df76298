#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>

#include "optsel/bench.hpp"

namespace optsel {

/// 17 significant digits, which round-trips every finite double.
/// Non-finite values become the JSON strings "Infinity", "-Infinity", "NaN".
inline std::string format_json_number(double v) {
  if (std::isnan(v)) return "\"NaN\"";
  if (std::isinf(v)) return v > 0 ? "\"Infinity\"" : "\"-Infinity\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Pretty-prints any nlohmann-style json value with floats formatted by
/// format_json_number. Works with both json and ordered_json.
template <class Json>
void dump_json17(const Json& j, std::string& out, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad_in;
      out += Json(it.key()).dump();
      out += ": ";
      dump_json17(it.value(), out, indent + 1);
    }
    out += "\n" + pad + "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    bool first = true;
    for (const auto& v : j) {
      if (!first) out += ",\n";
      first = false;
      out += pad_in;
      dump_json17(v, out, indent + 1);
    }
    out += "\n" + pad + "]";
  } else if (j.is_number_float()) {
    out += format_json_number(j.template get<double>());
  } else {
    out += j.dump();
  }
}

template <class Json>
std::string dump_json17(const Json& j) {
  std::string out;
  dump_json17(j, out, 0);
  out += "\n";
  return out;
}

/// Report document with top-level keys `meta` and `cells`.
std::string report_to_json(const BenchmarkReport& report);

/// Inverse of report_to_json. Throws ParseError on malformed input.
BenchmarkReport report_from_json(std::string_view text);

/// Fixed-width median table for terminals.
std::string report_table(const BenchmarkReport& report);

}  // namespace optsel
