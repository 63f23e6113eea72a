#pragma once

#include <array>

#include "sl2flow/mat2.hpp"
#include "sl2flow/state.hpp"

namespace sl2flow {

// rho(x)^2 = 2 + x1^2 + x2^2
inline double rho_sq(const Vec3& x) { return 2.0 + x[0] * x[0] + x[1] * x[1]; }

// The global chart of the unit-determinant group:
//   phi(x) = (rho cos x3 * Id + rho sin x3 * Rot + x1 * Diag + x2 * Off) / sqrt(2),
// with rho = sqrt(2 + x1^2 + x2^2). Lands on det = 1 exactly up to rounding,
// and |phi(x)|^2 = 2 (1 + x1^2 + x2^2).
Mat2 phi(const Vec3& x);

// Inverse chart. x1, x2 from the Diag/Off components, x3 = atan2 of the
// rotational part (principal value). Throws NotOnManifold when
// |det A - 1| > tol.
Vec3 phi_inverse(const Mat2& A, double tol = kMembershipTol);

// Closed-form columns d phi / d x_i.
std::array<Mat2, 3> phi_jacobian(const Vec3& x);

// Tangent-bundle chart: (x, y) -> (phi(x), D phi(x) y). The second component
// is tangent at the first.
PhaseState big_phi(const Vec3& x, const Vec3& y);

// Pull-back metric g(x) = Dphi(x)^T Dphi(x) and its closed-form inverse.
Mat3 metric_g(const Vec3& x);
Mat3 metric_g_inv(const Vec3& x);

// Legendre inverse: velocity y = g^{-1}(x) p for momentum p.
Vec3 gamma(const Vec3& x, const Vec3& p);

// Momentum of an ambient tangent vector: p_i = <d phi/d x_i, B>.
Vec3 chart_momentum(const Vec3& x, const Mat2& B);

ChartPoint chart_from_ambient(const PhaseState& s, double tol = kMembershipTol);
PhaseState ambient_from_chart(const ChartPoint& cp);

// Polar chart of the x-plane: psi(q) = (q1 cos q2, q1 sin q2, q3).
Vec3 psi(const Vec3& q);

// Reduced metric h(q) = diag[(2+q1^2)/(2(1+q1^2)), 1/q1^2, 1/(2+q1^2)].
// Throws SingularChart for q1 <= 0.
Vec3 metric_h(double q1);

// Columns of T(q), the map sending reduced momenta xi to ambient tangent
// vectors B = T(q) xi in the X2NonZero regime. Orthogonal columns with
// squared norms h_ii(q). Requires q1 > 0.
std::array<Mat2, 3> tangent_frame(const Vec3& q);

// Orthonormal tangent basis tau_i(A) at A: the normalized tangent_frame
// columns off the rotation subgroup, or (A*Diag, A*Off, A*Rot)/sqrt(2) on it.
std::array<Mat2, 3> orthonormal_tangent_frame(const Mat2& A,
                                              double tol = kMembershipTol);

// Reduced coordinates of an ambient state. Picks the regime from the value of
// the rotational invariant X2 (threshold 1e-10 relative to the energy scale);
// throws NotOnManifold when det or tangency defects exceed tol.
ReducedState ambient_to_reduced(const PhaseState& s,
                                double tol = kMembershipTol);

// Reconstruction (A, B) from reduced coordinates. Throws SingularChart for
// q1 <= 0 in the X2NonZero regime.
PhaseState reduced_to_ambient(const ReducedState& rs);

}  // namespace sl2flow
