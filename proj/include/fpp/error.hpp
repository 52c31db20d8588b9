#pragma once

#include <stdexcept>
#include <string>

namespace fpp {

// Error categories. Values are mirrored one-to-one by fpp_status in fpp.h.
enum class ErrorCode : int {
  domain = 1,
  quadrature_nonconvergence = 2,
  inversion_failure = 3,
  unsupported = 4,
  insufficient_samples = 5,
  zero_variance = 6,
  config = 7,
  io = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define FPP_DEFINE_ERROR(Name, Code)                                  \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(ErrorCode::Code, what) {} \
  };

FPP_DEFINE_ERROR(DomainError, domain)
FPP_DEFINE_ERROR(QuadratureError, quadrature_nonconvergence)
FPP_DEFINE_ERROR(InversionError, inversion_failure)
FPP_DEFINE_ERROR(UnsupportedError, unsupported)
FPP_DEFINE_ERROR(InsufficientSamplesError, insufficient_samples)
FPP_DEFINE_ERROR(ZeroVarianceError, zero_variance)
FPP_DEFINE_ERROR(ConfigError, config)
FPP_DEFINE_ERROR(IoError, io)

#undef FPP_DEFINE_ERROR

}  // namespace fpp
