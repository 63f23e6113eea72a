#pragma once

#include <stdexcept>
#include <string>

namespace sl2flow {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// State fails the det A = 1 or tangency requirement beyond tolerance.
struct NotOnManifold : Error {
  using Error::Error;
};

// Polar chart evaluated at q1 <= 0, or an integration in that chart
// collapsed below the analytic lower bound on q1.
struct SingularChart : Error {
  using Error::Error;
};

// Monitored invariant drift exceeded the configured budget.
struct ToleranceExceeded : Error {
  using Error::Error;
};

struct NotPeriodic : Error {
  using Error::Error;
};

struct NotConvergent : Error {
  using Error::Error;
};

struct NotUnbounded : Error {
  using Error::Error;
};

struct NoCriticalPoint : Error {
  using Error::Error;
};

struct EmptyLevelSet : Error {
  using Error::Error;
};

struct ParameterOutOfRange : Error {
  using Error::Error;
};

struct KappaMismatch : Error {
  using Error::Error;
};

}  // namespace sl2flow
