#include "gpcond/error.hpp"

namespace gpcond {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::NumericalFailure: return "numerical-failure";
    case ErrorKind::NotPsd: return "not-psd";
    case ErrorKind::NotSpd: return "not-spd";
    case ErrorKind::UnsupportedFunctional: return "unsupported-functional";
    case ErrorKind::InvalidUsage: return "invalid-usage";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace gpcond
