#pragma once

#include <stdexcept>
#include <string>

namespace latlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept = 0;
};

#define LATLAB_DECLARE_ERROR(Name)                                  \
  class Name : public Error {                                       \
   public:                                                          \
    using Error::Error;                                             \
    const char* kind() const noexcept override { return #Name; }    \
  }

LATLAB_DECLARE_ERROR(NumericalRankLoss);
LATLAB_DECLARE_ERROR(ExplosionGuard);
LATLAB_DECLARE_ERROR(UnsupportedDimension);
LATLAB_DECLARE_ERROR(TruncationTooTight);
LATLAB_DECLARE_ERROR(SNearPole);
LATLAB_DECLARE_ERROR(ConfigError);
LATLAB_DECLARE_ERROR(InsufficientData);
LATLAB_DECLARE_ERROR(InsufficientTail);
LATLAB_DECLARE_ERROR(FormatError);
LATLAB_DECLARE_ERROR(IOError);

#undef LATLAB_DECLARE_ERROR

}  // namespace latlab
