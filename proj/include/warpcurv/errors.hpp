#pragma once

#include <stdexcept>
#include <string>

namespace warpcurv {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutOfDomain : Error {
  using Error::Error;
};
struct InvalidParams : Error {
  using Error::Error;
};
struct InvalidEpsilon : InvalidParams {
  using InvalidParams::InvalidParams;
};
struct ConstructionFailed : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct CertificationFailed : Error {
  using Error::Error;
};
struct UnboundedInput : Error {
  using Error::Error;
};
struct DomainMargin : Error {
  using Error::Error;
};
struct FrameNotOrthonormal : Error {
  using Error::Error;
};
struct NotDiagonalizable : Error {
  using Error::Error;
};
struct FiberMismatch : Error {
  using Error::Error;
};
struct TorsionOrderMismatch : Error {
  using Error::Error;
};
struct BadCodim : Error {
  using Error::Error;
};
struct NotAspherical : Error {
  using Error::Error;
};
struct DegenerateTripod : Error {
  using Error::Error;
};
struct BadTree : Error {
  using Error::Error;
};

}  // namespace warpcurv
