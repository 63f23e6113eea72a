#pragma once

#include <array>
#include <cmath>

namespace sl2flow {

using Vec2 = std::array<double, 2>;

// 2x2 real matrix, row-major entries. All operations are closed-form; this
// is the ambient arena for everything else in the library.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  constexpr Mat2() = default;
  constexpr Mat2(double m11, double m12, double m21, double m22)
      : a11(m11), a12(m12), a21(m21), a22(m22) {}

  constexpr Mat2 operator+(const Mat2& o) const {
    return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
  }
  constexpr Mat2 operator-(const Mat2& o) const {
    return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
  }
  constexpr Mat2 operator-() const { return {-a11, -a12, -a21, -a22}; }
  constexpr Mat2 operator*(double s) const {
    return {a11 * s, a12 * s, a21 * s, a22 * s};
  }
  constexpr Mat2 operator/(double s) const {
    return {a11 / s, a12 / s, a21 / s, a22 / s};
  }
  constexpr Mat2 operator*(const Mat2& o) const {
    return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
            a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
  }
  constexpr Mat2& operator+=(const Mat2& o) { return *this = *this + o; }
  constexpr Mat2& operator-=(const Mat2& o) { return *this = *this - o; }

  constexpr Mat2 transpose() const { return {a11, a21, a12, a22}; }

  constexpr Vec2 apply(const Vec2& v) const {
    return {a11 * v[0] + a12 * v[1], a21 * v[0] + a22 * v[1]};
  }
};

constexpr Mat2 operator*(double s, const Mat2& m) { return m * s; }

// Orthogonal basis of the 2x2 matrices: the identity, the quarter-turn
// rotation generator, and the two trace-free symmetric reflections.
// Pairwise orthogonal, each of squared norm 2.
inline constexpr Mat2 kId{1.0, 0.0, 0.0, 1.0};
inline constexpr Mat2 kRot{0.0, -1.0, 1.0, 0.0};
inline constexpr Mat2 kDiag{1.0, 0.0, 0.0, -1.0};
inline constexpr Mat2 kOff{0.0, 1.0, 1.0, 0.0};

// Euclidean (Frobenius) inner product, <A,B> = sum_ij A_ij B_ij = tr A^T B.
constexpr double inner(const Mat2& a, const Mat2& b) {
  return a.a11 * b.a11 + a.a12 * b.a12 + a.a21 * b.a21 + a.a22 * b.a22;
}

constexpr double norm_sq(const Mat2& a) { return inner(a, a); }

inline double norm(const Mat2& a) { return std::sqrt(norm_sq(a)); }

constexpr double trace(const Mat2& a) { return a.a11 + a.a22; }

// cof [[a,b],[c,d]] = [[d,-c],[-b,a]]. Linear, symmetric and orthogonal
// with respect to the inner product above; for det A = 1 it is the inverse
// transpose, and it spans the normal direction to that constraint set.
constexpr Mat2 cofactor(const Mat2& a) {
  return {a.a22, -a.a21, -a.a12, a.a11};
}

constexpr double det2(const Mat2& a) { return a.a11 * a.a22 - a.a12 * a.a21; }

// Adjugate inverse. Caller guarantees det != 0.
constexpr Mat2 inverse(const Mat2& a) {
  const double d = det2(a);
  return {a.a22 / d, -a.a12 / d, -a.a21 / d, a.a11 / d};
}

// U(theta) = cos(theta) Id + sin(theta) Rot, the rotation by theta.
inline Mat2 rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c, -s, s, c};
}

inline constexpr double kMembershipTol = 1e-9;

inline bool is_sl2(const Mat2& a, double tol = kMembershipTol) {
  return std::abs(det2(a) - 1.0) <= tol;
}

// |A|^2 = 2 characterizes the rotations among the unit-determinant matrices.
inline bool is_so2(const Mat2& a, double tol = kMembershipTol) {
  return is_sl2(a, tol) && std::abs(norm_sq(a) - 2.0) <= tol;
}

// <B, cof A>; vanishes exactly when B is tangent at A to the det = 1 set.
constexpr double tangent_defect(const Mat2& a, const Mat2& b) {
  return inner(b, cofactor(a));
}

}  // namespace sl2flow
