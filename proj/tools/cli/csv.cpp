#include "cli/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "optsel/report_io.hpp"

namespace optsel::cli {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Parses a whole field as a double; nullopt when it is not a number.
std::optional<double> to_number(std::string_view field) {
  if (field.empty()) return std::nullopt;
  const std::string s(field);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return v;
}

std::string where(std::size_t line, std::size_t col) {
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

DesignMatrix parse_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  std::size_t line_no = 0;
  bool first_content = true;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;

    const auto fields = split_fields(line);
    if (first_content) {
      first_content = false;
      bool any_numeric = false;
      for (const auto f : fields) any_numeric = any_numeric || to_number(f).has_value();
      if (!any_numeric) continue;  // header
    }
    std::vector<double> values;
    values.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto v = to_number(fields[c]);
      if (!v) {
        throw Error(ErrorCode::ParseError,
                    "not a number '" + std::string(fields[c]) + "' at " + where(line_no, c + 1));
      }
      if (!std::isfinite(*v)) {
        throw Error(ErrorCode::NonFinite, "non-finite value at " + where(line_no, c + 1));
      }
      values.push_back(*v);
    }
    if (rows.empty()) {
      width = values.size();
    } else if (values.size() != width) {
      throw Error(ErrorCode::RaggedRows,
                  "line " + std::to_string(line_no) + " has " + std::to_string(values.size()) +
                      " fields, expected " + std::to_string(width));
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw Error(ErrorCode::ParseError, "no data rows");

  DesignMatrix x(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      x(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return x;
}

DesignMatrix ingest_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::string selection_csv(const Selection& sel) {
  std::string out = "index,multiplicity\n";
  for (std::size_t t = 0; t < sel.indices.size(); ++t) {
    out += std::to_string(sel.indices[t]) + "," + std::to_string(sel.multiplicities[t]) + "\n";
  }
  return out;
}

std::string weights_csv(const WeightVector& pi) {
  std::string out = "index,weight\n";
  for (Index i = 0; i < pi.size(); ++i) {
    out += std::to_string(i) + "," + format_json_number(pi.values(i)) + "\n";
  }
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace optsel::cli
