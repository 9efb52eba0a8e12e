#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace holomap {

enum class ErrorCode {
  division_by_zero,
  dimension_mismatch,
  non_positive_parameter,
  unsupported_stratum,
  unsupported_dimension,
  precondition_violated,
  not_in_ball,
  not_unitary,
  not_a_stabilizer,
  not_unimodular,
  congruence_violated,
  branch_violated,
  degenerate_blaschke,
  zero_fix_required,
  domain_violation,
  not_invertible,
  wrong_node_type,
  instance_too_large,
  parse_error,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::division_by_zero: return "DivisionByZero";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::non_positive_parameter: return "NonPositiveParameter";
    case ErrorCode::unsupported_stratum: return "UnsupportedStratum";
    case ErrorCode::unsupported_dimension: return "UnsupportedDimension";
    case ErrorCode::precondition_violated: return "PreconditionViolated";
    case ErrorCode::not_in_ball: return "NotInBall";
    case ErrorCode::not_unitary: return "NotUnitary";
    case ErrorCode::not_a_stabilizer: return "NotAStabilizer";
    case ErrorCode::not_unimodular: return "NotUnimodular";
    case ErrorCode::congruence_violated: return "CongruenceViolated";
    case ErrorCode::branch_violated: return "BranchViolated";
    case ErrorCode::degenerate_blaschke: return "DegenerateBlaschke";
    case ErrorCode::zero_fix_required: return "ZeroFixRequired";
    case ErrorCode::domain_violation: return "DomainViolation";
    case ErrorCode::not_invertible: return "NotInvertible";
    case ErrorCode::wrong_node_type: return "WrongNodeType";
    case ErrorCode::instance_too_large: return "InstanceTooLarge";
    case ErrorCode::parse_error: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Positions are 1-based.
struct SourcePosition {
  std::size_t line = 1;
  std::size_t column = 1;
  friend bool operator==(const SourcePosition&, const SourcePosition&) = default;
};

class ParseError : public Error {
 public:
  ParseError(SourcePosition pos, std::string expected, std::string found)
      : Error(ErrorCode::parse_error,
              "line " + std::to_string(pos.line) + ", column " + std::to_string(pos.column) +
                  ": expected " + expected + ", found " + found),
        position_(pos),
        expected_(std::move(expected)),
        found_(std::move(found)) {}

  const SourcePosition& position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  SourcePosition position_;
  std::string expected_;
  std::string found_;
};

}  // namespace holomap
