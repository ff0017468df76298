#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "optsel/relaxation.hpp"
#include "optsel/selectors.hpp"

namespace optsel::cli {

/// Comma-separated decimal floats, one design point per line. A first line
/// with no numeric field is treated as a header and skipped. Blank lines
/// are ignored; CRLF endings are accepted. Errors carry 1-based line and
/// column (field) numbers.
DesignMatrix parse_csv(std::string_view text);

/// parse_csv on a file's contents. Throws ParseError if it cannot be read.
DesignMatrix ingest_csv(const std::filesystem::path& path);

/// Header `index,multiplicity`, 0-based indices.
std::string selection_csv(const Selection& sel);

/// Header `index,weight`.
std::string weights_csv(const WeightVector& pi);

void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace optsel::cli
