#pragma once

#include <stdexcept>
#include <string>

namespace calabi {

// Every failure carries a short machine-readable name (printed by the CLI).
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("ConfigError", what) {}
};

#define CALABI_NUMERICAL_ERROR(Type)                                   \
  class Type : public NumericalError {                                 \
   public:                                                             \
    explicit Type(const std::string& what) : NumericalError(#Type, what) {} \
  };

CALABI_NUMERICAL_ERROR(StepTooCoarse)
CALABI_NUMERICAL_ERROR(ZeroVector)
CALABI_NUMERICAL_ERROR(OutsideDisk)
CALABI_NUMERICAL_ERROR(NotAreaPreserving)
CALABI_NUMERICAL_ERROR(BoundaryNotConstant)
CALABI_NUMERICAL_ERROR(OrbitCollision)
CALABI_NUMERICAL_ERROR(ScaleTooLarge)
CALABI_NUMERICAL_ERROR(QMaxExceeded)

#undef CALABI_NUMERICAL_ERROR

}  // namespace calabi
