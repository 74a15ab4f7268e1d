#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace toriclg {

enum class ErrorCode {
  Overflow,
  ZeroSeries,
  NegativeValuation,
  OutOfRange,
  Parse,
  Unbounded,
  EmptyInterior,
  NotSmooth,
  Malformed,
  NoConeDecomposition,
  DimensionMismatch,
  OutsideP,
  NotInterior,
  F2Required,
  ZeroCoordinate,
  ValuationUnstable,
  TrackingLost,
  Underresolved,
  DegenerateLeading,
  OrderUnreachable,
  NotMorse,
  ZeroD,
  SingularPairing,
  InvalidAlgebra,
  Degenerate,
  UnsupportedModel,
  Usage,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace toriclg
