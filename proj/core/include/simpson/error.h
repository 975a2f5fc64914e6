#ifndef SIMPSON_ERROR_H_
#define SIMPSON_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace simpson {

enum class ErrorCode {
  kInvalidArgument,
  kZeroMargin,
  kEmptyTable,
  kEmptyStratifiedTable,
  kNotBinaryStratifier,
  kDegenerateSegment,
  kExtremeDependence,
  kInfeasibleAtResolution,
  kDegenerateMarginal,
  kPriorNotNormalized,
  kUnknownColumn,
  kNonBinaryValue,
  kEmptyInput,
  kTooManyStrata,
  kParseError,
};

std::string_view error_code_name(ErrorCode code);

// All library failures are reported as this exception; `code()` identifies the
// condition and `what()` carries a human-readable explanation.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace simpson

#endif  // SIMPSON_ERROR_H_
