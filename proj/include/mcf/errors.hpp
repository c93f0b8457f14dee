#pragma once

#include <stdexcept>
#include <string>

namespace mcf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MCF_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

MCF_DEFINE_ERROR(InvalidDims);
MCF_DEFINE_ERROR(DegenerateMeanCurvature);
MCF_DEFINE_ERROR(InvalidSample);
MCF_DEFINE_ERROR(InvalidConstants);
MCF_DEFINE_ERROR(UnsupportedDimension);
MCF_DEFINE_ERROR(NonpositiveKappa);
MCF_DEFINE_ERROR(NotPinched);
MCF_DEFINE_ERROR(PastBlowup);
MCF_DEFINE_ERROR(NonpositiveZ);
MCF_DEFINE_ERROR(NotPinchedAtBase);

#undef MCF_DEFINE_ERROR

}  // namespace mcf
