#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace optsel {

/// Machine-readable failure category. The CLI reports `code()` in its
/// `error` field.
enum class ErrorCode {
  SingularMatrix,
  DowndateSingular,
  SingularWeighting,
  InfeasibleBall,
  EmptySelection,
  RankCollapse,
  InvalidArgument,
  ParseError,
  RaggedRows,
  NonFinite,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Numerical/domain failures map to exit 2; malformed input maps to 1.
  bool is_numerical() const noexcept {
    switch (code_) {
      case ErrorCode::InvalidArgument:
      case ErrorCode::ParseError:
      case ErrorCode::RaggedRows:
      case ErrorCode::NonFinite:
        return false;
      default:
        return true;
    }
  }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::DowndateSingular: return "DowndateSingular";
    case ErrorCode::SingularWeighting: return "SingularWeighting";
    case ErrorCode::InfeasibleBall: return "InfeasibleBall";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::RankCollapse: return "RankCollapse";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::NonFinite: return "NonFinite";
  }
  return "Unknown";
}

}  // namespace optsel
