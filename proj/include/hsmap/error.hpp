#pragma once

#include <stdexcept>
#include <string>

namespace hsmap {

enum class ErrorCode {
  ParameterDomain,      // invalid polynomial / problem parameters
  Inadmissible,         // (g, m0, m1) not in the classification list
  TangentialUnknown,    // exceptional g = 4 triple, tension field not reduced
  Singularity,          // evaluation at or beyond a singular endpoint
  KindMismatch,         // closed-form solution not available for this problem
  Precondition,
  Divergence,
  Bracketing,
  Convergence,
  NotFound,
  NotEigenvalue,
  NoClosedForm,
  Numeric,
  Config,
  Io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace hsmap
