#pragma once

#include <cstddef>

#include "sl2flow/mat2.hpp"
#include "sl2flow/state.hpp"

namespace sl2flow {

// Spatial velocity gradient L(A, B) = B A^{-1}; trace free on valid states.
Mat2 velocity_gradient(const PhaseState& s);

// Instantaneous fluid ellipse of the deformation A: image of the unit disk.
struct EllipseGeometry {
  double semi_major = 1.0;
  double semi_minor = 1.0;
  double orientation = 0.0;  // major-axis angle in (-pi/2, pi/2]; 0 at the disk
  double area = 0.0;
};

EllipseGeometry ellipse_of(const Mat2& A, double tol = kMembershipTol);

// Velocity, magnetic field and pressure at a spatial point:
//   u = B A^{-1} x,  b = c0 A Rot A^{-1} x,  p = lambda (1 - |A^{-1}x|^2) / 2.
struct FieldSample {
  Vec2 position{};
  Vec2 velocity{};
  Vec2 magnetic{};
  double pressure = 0.0;
  bool inside = false;
};

FieldSample fields_at(const PhaseState& s, double kappa, double c0,
                      const Vec2& x);

struct DivergenceReport {
  double div_u = 0.0;            // tr B A^{-1}
  double div_b = 0.0;            // c0 tr A Rot A^{-1}
  double max_boundary_bn = 0.0;  // max |b . n| over sampled boundary points
};

DivergenceReport divergence_checks(const PhaseState& s, double kappa,
                                   double c0, std::size_t sample_count);

}  // namespace sl2flow
