#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace armimo {

// Every numerical failure carries a stable name; the CLI prints it on stderr
// and exits with code 3. ConfigError maps to exit code 2.
class Error : public std::runtime_error {
 public:
  Error(std::string_view name, const std::string& what)
      : std::runtime_error(std::string(name) + ": " + what), name_(name) {}

  std::string_view name() const noexcept { return name_; }

 private:
  std::string_view name_;
};

#define ARMIMO_DEFINE_ERROR(Type)                                    \
  class Type : public Error {                                       \
   public:                                                          \
    explicit Type(const std::string& what) : Error(#Type, what) {}  \
  }

ARMIMO_DEFINE_ERROR(DimensionMismatch);
ARMIMO_DEFINE_ERROR(InvalidParameter);
ARMIMO_DEFINE_ERROR(NotPSD);
ARMIMO_DEFINE_ERROR(SingularBlock);
ARMIMO_DEFINE_ERROR(SolveFailure);
ARMIMO_DEFINE_ERROR(ZeroVector);
ARMIMO_DEFINE_ERROR(NoConvergence);
ARMIMO_DEFINE_ERROR(BracketFailure);
ARMIMO_DEFINE_ERROR(PoleProximity);
ARMIMO_DEFINE_ERROR(OutOfDomain);
ARMIMO_DEFINE_ERROR(UnknownPreset);
ARMIMO_DEFINE_ERROR(ConfigError);

#undef ARMIMO_DEFINE_ERROR

// Wraps a module error with the Monte Carlo trial or sweep point that raised it.
class ContextError : public Error {
 public:
  ContextError(const Error& inner, const std::string& context)
      : Error(inner.name(), context + ": " + inner.what()) {}
};

}  // namespace armimo
