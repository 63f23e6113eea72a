#pragma once

#include <algorithm>
#include <cmath>

#include "sl2flow/mat2.hpp"
#include "sl2flow/state.hpp"

namespace sl2flow::test {

inline double max_abs_diff(const Mat2& a, const Mat2& b) {
  return std::max({std::abs(a.a11 - b.a11), std::abs(a.a12 - b.a12),
                   std::abs(a.a21 - b.a21), std::abs(a.a22 - b.a22)});
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max({1.0, std::abs(got), std::abs(want)});
}

inline double wrap_angle(double a) {
  const double two_pi = 2.0 * 3.14159265358979323846;
  a = std::fmod(a, two_pi);
  if (a < 0.0) a += two_pi;
  return a;
}

// Distance between angles modulo 2 pi.
inline double angle_diff(double a, double b) {
  const double pi = 3.14159265358979323846;
  double d = wrap_angle(a - b);
  if (d > pi) d = 2.0 * pi - d;
  return d;
}

}  // namespace sl2flow::test
