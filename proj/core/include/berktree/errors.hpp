#pragma once

#include <stdexcept>
#include <string>

namespace berktree {

// Every failure raised by the library derives from Error, so callers can
// separate mathematical refusals from programming mistakes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PrecisionExhausted : Error {
  using Error::Error;
};
struct DivisionByZero : Error {
  using Error::Error;
};
struct NegativeValuation : Error {
  using Error::Error;
};
// Ramification divisible by p, or root clustering deeper than the
// configured recursion limit.
struct WildCase : Error {
  using Error::Error;
};
struct HenselPreconditionFailed : Error {
  using Error::Error;
};
struct TypeIPoint : Error {
  using Error::Error;
};
struct NoFixedParameter : Error {
  using Error::Error;
};
struct DegreeBoundExceeded : Error {
  using Error::Error;
};
struct LevelBoundExceeded : Error {
  using Error::Error;
};
struct NonAffineProbe : Error {
  using Error::Error;
};
// Carries a human-readable dump of the last barycenters seen.
struct NotStabilized : Error {
  NotStabilized(const std::string& what, std::string bracket)
      : Error(what), bracketing(std::move(bracket)) {}
  std::string bracketing;
};
struct InputError : Error {
  using Error::Error;
};
// A postcondition the theory guarantees did not hold.
struct InvariantViolation : Error {
  using Error::Error;
};

}  // namespace berktree
