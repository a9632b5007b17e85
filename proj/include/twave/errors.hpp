#pragma once

#include <stdexcept>
#include <string>

namespace twave {

// Every library failure derives from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define TWAVE_DECLARE_ERROR(Name)          \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  };

TWAVE_DECLARE_ERROR(DegenerateStates)
TWAVE_DECLARE_ERROR(InvalidConfig)
TWAVE_DECLARE_ERROR(CapNotPositive)
TWAVE_DECLARE_ERROR(NoConvergence)
TWAVE_DECLARE_ERROR(BranchViolation)
TWAVE_DECLARE_ERROR(InsufficientData)
TWAVE_DECLARE_ERROR(NoBracket)
TWAVE_DECLARE_ERROR(BracketBroken)
TWAVE_DECLARE_ERROR(QuadratureFailure)
TWAVE_DECLARE_ERROR(NoSignChange)

#undef TWAVE_DECLARE_ERROR

}  // namespace twave
