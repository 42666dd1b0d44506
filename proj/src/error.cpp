#include "hsmap/error.hpp"

namespace hsmap {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParameterDomain: return "parameter-domain";
    case ErrorCode::Inadmissible: return "inadmissible";
    case ErrorCode::TangentialUnknown: return "tangential-part-unknown";
    case ErrorCode::Singularity: return "singularity";
    case ErrorCode::KindMismatch: return "kind-mismatch";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::Divergence: return "divergence";
    case ErrorCode::Bracketing: return "bracketing";
    case ErrorCode::Convergence: return "convergence";
    case ErrorCode::NotFound: return "not-found";
    case ErrorCode::NotEigenvalue: return "lambda-not-eigenvalue";
    case ErrorCode::NoClosedForm: return "no-closed-form";
    case ErrorCode::Numeric: return "numeric";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace hsmap
