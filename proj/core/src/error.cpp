#include "expanderlab/error.hpp"

namespace expanderlab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::UnderResolved: return "UnderResolved";
    case ErrorCode::OrientationUnset: return "OrientationUnset";
    case ErrorCode::AxisTouch: return "AxisTouch";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::ResidualExceeded: return "ResidualExceeded";
    case ErrorCode::BlowUp: return "BlowUp";
    case ErrorCode::AxisSingularity: return "AxisSingularity";
    case ErrorCode::ReductionUnavailable: return "ReductionUnavailable";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::TruncationDominated: return "TruncationDominated";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::SpectrumUnavailable: return "SpectrumUnavailable";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace expanderlab
