#pragma once

#include <array>

#include "sl2flow/mat2.hpp"

namespace sl2flow {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;  // row-major

// Position/velocity pair (A, B). Valid dynamical states have det A = 1 and
// <B, cof A> = 0; B is the time derivative of A along a motion.
struct PhaseState {
  Mat2 A;
  Mat2 B;
};

// Canonical coordinates (x, p) of the global chart covering all of the
// det = 1 group: x = (x1, x2, x3) with x3 an angle, p the conjugate momenta.
struct ChartPoint {
  Vec3 x{};
  Vec3 p{};
};

// Which reduced phase-plane system applies. The choice is made once from the
// initial data and is preserved by the flow: X2 != 0 forces the state to stay
// off the rotation subgroup, X2 = 0 keeps the polar axis direction frozen.
enum class Regime {
  X2NonZero,  // polar chart, q1 > 0 required
  X2Zero,     // q1 unrestricted; q2 and xi2 coincide and stay constant
};

// Polar-reduced coordinates (q, xi). In the X2NonZero regime these are the
// canonical coordinates of the polar chart and xi2, xi3 equal the rotational
// invariants. In the X2Zero regime q2 = xi2 is the frozen axis angle.
struct ReducedState {
  Vec3 q{};
  Vec3 xi{};
  Regime regime = Regime::X2NonZero;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator*(double s, const Vec3& a) {
  return {s * a[0], s * a[1], s * a[2]};
}

inline Vec3 mat_vec(const Mat3& m, const Vec3& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
          m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
          m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

inline Mat3 mat_mul(const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

}  // namespace sl2flow
