#pragma once

#include <stdexcept>
#include <string>

namespace expanderlab {

enum class ErrorCode {
  InvalidInput,
  UnderResolved,
  OrientationUnset,
  AxisTouch,
  Overflow,
  ResidualExceeded,
  BlowUp,
  AxisSingularity,
  ReductionUnavailable,
  NotConverged,
  TruncationDominated,
  ZeroDenominator,
  SpectrumUnavailable,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace expanderlab
