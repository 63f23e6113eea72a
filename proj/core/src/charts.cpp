#include "sl2flow/charts.hpp"

#include <cmath>

#include "sl2flow/errors.hpp"

namespace sl2flow {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Angle threshold deciding whether the polar direction comes from x-bar or
// from p-bar when x-bar is numerically negligible.
constexpr double kAxisPickTol = 1e-9;

double norm2(double a, double b) { return std::sqrt(a * a + b * b); }

}  // namespace

Mat2 phi(const Vec3& x) {
  const double rho = std::sqrt(rho_sq(x));
  const double c = std::cos(x[2]);
  const double s = std::sin(x[2]);
  return {(rho * c + x[0]) / kSqrt2, (-rho * s + x[1]) / kSqrt2,
          (rho * s + x[1]) / kSqrt2, (rho * c - x[0]) / kSqrt2};
}

Vec3 phi_inverse(const Mat2& A, double tol) {
  if (std::abs(det2(A) - 1.0) > tol) {
    throw NotOnManifold("phi_inverse: |det A - 1| exceeds tolerance");
  }
  const double x1 = inner(A, kDiag) / kSqrt2;
  const double x2 = inner(A, kOff) / kSqrt2;
  const double x3 = std::atan2(inner(A, kRot), inner(A, kId));
  return {x1, x2, x3};
}

std::array<Mat2, 3> phi_jacobian(const Vec3& x) {
  const double rho = std::sqrt(rho_sq(x));
  const double c = std::cos(x[2]);
  const double s = std::sin(x[2]);
  const Mat2 radial = kId * c + kRot * s;  // d phi / d rho direction
  return {(radial * (x[0] / rho) + kDiag) / kSqrt2,
          (radial * (x[1] / rho) + kOff) / kSqrt2,
          (kId * (-s) + kRot * c) * (rho / kSqrt2)};
}

PhaseState big_phi(const Vec3& x, const Vec3& y) {
  const auto J = phi_jacobian(x);
  return {phi(x), J[0] * y[0] + J[1] * y[1] + J[2] * y[2]};
}

Mat3 metric_g(const Vec3& x) {
  const double r2 = rho_sq(x);
  return {{{1.0 + x[0] * x[0] / r2, x[0] * x[1] / r2, 0.0},
           {x[0] * x[1] / r2, 1.0 + x[1] * x[1] / r2, 0.0},
           {0.0, 0.0, r2}}};
}

Mat3 metric_g_inv(const Vec3& x) {
  const double r2 = rho_sq(x);
  const double f = r2 + x[0] * x[0] + x[1] * x[1];  // |phi(x)|^2
  return {{{1.0 - x[0] * x[0] / f, -x[0] * x[1] / f, 0.0},
           {-x[0] * x[1] / f, 1.0 - x[1] * x[1] / f, 0.0},
           {0.0, 0.0, 1.0 / r2}}};
}

Vec3 gamma(const Vec3& x, const Vec3& p) { return mat_vec(metric_g_inv(x), p); }

Vec3 chart_momentum(const Vec3& x, const Mat2& B) {
  const auto J = phi_jacobian(x);
  return {inner(J[0], B), inner(J[1], B), inner(J[2], B)};
}

ChartPoint chart_from_ambient(const PhaseState& s, double tol) {
  const Vec3 x = phi_inverse(s.A, tol);
  return {x, chart_momentum(x, s.B)};
}

PhaseState ambient_from_chart(const ChartPoint& cp) {
  return big_phi(cp.x, gamma(cp.x, cp.p));
}

Vec3 psi(const Vec3& q) {
  return {q[0] * std::cos(q[1]), q[0] * std::sin(q[1]), q[2]};
}

Vec3 metric_h(double q1) {
  if (q1 <= 0.0) {
    throw SingularChart("metric_h: q1 must be positive");
  }
  const double q2 = q1 * q1;
  return {(2.0 + q2) / (2.0 * (1.0 + q2)), 1.0 / q2, 1.0 / (2.0 + q2)};
}

std::array<Mat2, 3> tangent_frame(const Vec3& q) {
  if (q[0] <= 0.0) {
    throw SingularChart("tangent_frame: q1 must be positive");
  }
  const Vec3 x = psi(q);
  const auto J = phi_jacobian(x);
  const Mat3 ginv = metric_g_inv(x);
  const double c = std::cos(q[1]);
  const double s = std::sin(q[1]);
  // Columns of Dpsi(q)^{-T}.
  const Mat3 dpsi_invT = {
      {{c, -s / q[0], 0.0}, {s, c / q[0], 0.0}, {0.0, 0.0, 1.0}}};
  std::array<Mat2, 3> cols{};
  for (int i = 0; i < 3; ++i) {
    const Vec3 e = {dpsi_invT[0][i], dpsi_invT[1][i], dpsi_invT[2][i]};
    const Vec3 y = mat_vec(ginv, e);
    cols[i] = J[0] * y[0] + J[1] * y[1] + J[2] * y[2];
  }
  return cols;
}

std::array<Mat2, 3> orthonormal_tangent_frame(const Mat2& A, double tol) {
  const double q1sq = 0.5 * norm_sq(A) - 1.0;
  if (q1sq <= tol) {
    // On the rotation subgroup the frame (A*Diag, A*Off, A*Rot)/sqrt(2) is
    // orthonormal and tangent.
    return {A * kDiag / kSqrt2, A * kOff / kSqrt2, A * kRot / kSqrt2};
  }
  const Vec3 x = phi_inverse(A, tol);
  const Vec3 q = {std::sqrt(q1sq), std::atan2(x[1], x[0]), x[2]};
  const auto T = tangent_frame(q);
  const Vec3 h = metric_h(q[0]);
  return {T[0] / std::sqrt(h[0]), T[1] / std::sqrt(h[1]),
          T[2] / std::sqrt(h[2])};
}

ReducedState ambient_to_reduced(const PhaseState& s, double tol) {
  const Vec3 x = phi_inverse(s.A, tol);  // throws off det = 1
  const double scale = 0.5 * (norm_sq(s.A) + norm_sq(s.B));
  if (std::abs(tangent_defect(s.A, s.B)) > tol * std::max(1.0, scale)) {
    throw NotOnManifold("ambient_to_reduced: velocity is not tangent");
  }
  const Vec3 p = chart_momentum(x, s.B);
  const double X2 = x[0] * p[1] - x[1] * p[0];

  if (std::abs(X2) > 1e-10 * std::max(1.0, scale)) {
    const double q1 = norm2(x[0], x[1]);
    const Vec3 q = {q1, std::atan2(x[1], x[0]), x[2]};
    // xi = Dpsi(q)^T p
    const double c = std::cos(q[1]);
    const double s2 = std::sin(q[1]);
    const Vec3 xi = {c * p[0] + s2 * p[1],
                     q1 * (-s2 * p[0] + c * p[1]), p[2]};
    return {q, xi, Regime::X2NonZero};
  }

  // X2 = 0: x-bar and p-bar are parallel; pick the common axis direction.
  const double sx = norm2(x[0], x[1]);
  const double sp = norm2(p[0], p[1]);
  double q2 = 0.0;
  if (sx > kAxisPickTol * std::max(1.0, sp)) {
    q2 = std::atan2(x[1], x[0]);
  } else if (sp > 0.0) {
    q2 = std::atan2(p[1], p[0]);
  }
  const double c = std::cos(q2);
  const double s2 = std::sin(q2);
  const double q1 = c * x[0] + s2 * x[1];
  const double xi1 = c * p[0] + s2 * p[1];
  return {{q1, q2, x[2]}, {xi1, q2, p[2]}, Regime::X2Zero};
}

PhaseState reduced_to_ambient(const ReducedState& rs) {
  Vec3 x{};
  Vec3 p{};
  if (rs.regime == Regime::X2NonZero) {
    if (rs.q[0] <= 0.0) {
      throw SingularChart("reduced_to_ambient: q1 must be positive");
    }
    x = psi(rs.q);
    const double c = std::cos(rs.q[1]);
    const double s = std::sin(rs.q[1]);
    // p = Dpsi(q)^{-T} xi
    p = {c * rs.xi[0] - s * rs.xi[1] / rs.q[0],
         s * rs.xi[0] + c * rs.xi[1] / rs.q[0], rs.xi[2]};
  } else {
    x = psi(rs.q);
    p = psi({rs.xi[0], rs.q[1], rs.xi[2]});
  }
  return ambient_from_chart({x, p});
}

}  // namespace sl2flow
