#include "sl2flow/physics.hpp"

#include <cmath>

#include "sl2flow/dynamics.hpp"
#include "sl2flow/errors.hpp"

namespace sl2flow {

Mat2 velocity_gradient(const PhaseState& s) { return s.B * inverse(s.A); }

EllipseGeometry ellipse_of(const Mat2& A, double tol) {
  if (!is_sl2(A, tol)) {
    throw NotOnManifold("ellipse_of: det A != 1");
  }
  const double half_n2 = 0.5 * norm_sq(A);
  const double plus = std::sqrt(half_n2 + 1.0);
  const double minus = std::sqrt(std::max(0.0, half_n2 - 1.0));
  EllipseGeometry e;
  e.semi_major = (plus + minus) / std::sqrt(2.0);
  e.semi_minor = (plus - minus) / std::sqrt(2.0);
  // Major principal direction of (A A^T)^{1/2}; degenerates to 0 at the disk.
  const Mat2 s = A * A.transpose();
  const double off = 2.0 * s.a12;
  const double diff = s.a11 - s.a22;
  e.orientation = (off == 0.0 && diff == 0.0) ? 0.0 : 0.5 * std::atan2(off, diff);
  e.area = 3.14159265358979323846 * e.semi_major * e.semi_minor;
  return e;
}

FieldSample fields_at(const PhaseState& s, double kappa, double c0,
                      const Vec2& x) {
  if (std::abs(c0 * c0 - kappa) > 1e-12) {
    throw KappaMismatch("fields_at: c0^2 must equal kappa");
  }
  const Mat2 ainv = inverse(s.A);
  const Vec2 y = ainv.apply(x);  // reference coordinates
  const double y_sq = y[0] * y[0] + y[1] * y[1];
  FieldSample out;
  out.position = x;
  out.velocity = s.B.apply(y);
  out.magnetic = (s.A * kRot * c0).apply(y);
  out.pressure = 0.5 * lagrange_multiplier(s, kappa) * (1.0 - y_sq);
  out.inside = y_sq <= 1.0 + 1e-12;
  return out;
}

DivergenceReport divergence_checks(const PhaseState& s, double kappa,
                                   double c0, std::size_t sample_count) {
  if (std::abs(c0 * c0 - kappa) > 1e-12) {
    throw KappaMismatch("divergence_checks: c0^2 must equal kappa");
  }
  DivergenceReport rep;
  rep.div_u = trace(velocity_gradient(s));
  rep.div_b = c0 * trace(s.A * kRot * inverse(s.A));

  const Mat2 ainv = inverse(s.A);
  const Mat2 ainv_t = ainv.transpose();
  const double two_pi = 2.0 * 3.14159265358979323846;
  for (std::size_t i = 0; i < sample_count; ++i) {
    const double th = two_pi * static_cast<double>(i) /
                      static_cast<double>(std::max<std::size_t>(1, sample_count));
    const Vec2 y = {std::cos(th), std::sin(th)};  // reference boundary point
    const Vec2 b = (s.A * kRot * c0).apply(y);
    Vec2 nrm = ainv_t.apply(y);  // normal direction at x = A y
    const double nn = std::sqrt(nrm[0] * nrm[0] + nrm[1] * nrm[1]);
    nrm = {nrm[0] / nn, nrm[1] / nn};
    rep.max_boundary_bn =
        std::max(rep.max_boundary_bn, std::abs(b[0] * nrm[0] + b[1] * nrm[1]));
  }
  return rep;
}

}  // namespace sl2flow
