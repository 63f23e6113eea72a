#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "sl2flow/dynamics.hpp"
#include "sl2flow/mat2.hpp"
#include "sl2flow/state.hpp"

namespace sl2flow {

enum class OrbitKind {
  Equilibrium,
  RigidRotation,
  Rigid,
  PeriodicRadius,
  Homoclinic,
  UnboundedBothEnds,
  UnboundedForward,
  UnboundedBackward,
};

const char* to_string(OrbitKind kind);

struct OrbitClass {
  OrbitKind kind = OrbitKind::Equilibrium;
  bool pressureless = false;
  bool passes_through_so2 = false;
  // Filled when an equality test falls just outside its tolerance band; the
  // generic class is reported but the caller is told it is near a boundary.
  std::vector<std::string> warnings;
};

// Complete orbit classification from initial data. The decision tree runs on
// (kappa, X1, X2, X3, |A0|^2, <A0,B0>) with relative tolerance
// tol * max(1, X1) on the invariant equalities.
OrbitClass classify(const PhaseState& s, double kappa, double tol = 1e-9);

// Residuals of the two stationarity conditions characterizing rigid motion
// with |A0|^2 > 2; both vanish exactly on rigid solutions.
std::array<double, 2> rigid_conditions(double norm_a0_sq,
                                       const Invariants& inv);

enum class CriticalPointType { Minimum, Saddle, Center, Degenerate };

struct CriticalPoint {
  double q1 = 0.0;
  CriticalPointType type = CriticalPointType::Minimum;
};

// Critical points of the reduced (q1, xi1) phase plane for the given
// invariants. Throws NoCriticalPoint when kappa = 0 and X2 != 0 (all level
// sets are unbounded).
std::vector<CriticalPoint> critical_points(double kappa, double X2, double X3);

struct FrequencyReport {
  double T = 0.0;            // period of |A(t)| (any positive value if rigid)
  double omega1 = 0.0;       // mean rotation rates of the two circle factors
  double omega2 = 0.0;
  double hatA_period = 0.0;  // T, or 2T when the orbit meets the rotations
};

// Period and rotation frequencies for periodic-radius and rigid orbits.
// Throws NotPeriodic otherwise.
FrequencyReport frequencies(const PhaseState& s, double kappa);

enum class ReducedHamiltonian { Htilde, H0 };

enum class CurveTopology { Point, Closed, Unbounded, Homoclinic, EquilibriumLine };

const char* to_string(CurveTopology t);

struct LevelCurve {
  CurveTopology topology = CurveTopology::Closed;
  std::vector<std::array<double, 2>> points;  // (q1, xi1)
};

struct LevelSet {
  double energy = 0.0;
  std::vector<LevelCurve> curves;
};

struct LevelCurveOptions {
  std::size_t samples_per_branch = 512;
  double q1_view = 5.0;  // clip for unbounded branches
};

// Extracts {H = energy} in the (q1, xi1) plane by solving the quadratic
// dependence on xi1 explicitly; branches carry topology tags. Throws
// EmptyLevelSet when the energy is below the admissible minimum.
LevelSet level_curve(ReducedHamiltonian which, double kappa, double X2,
                     double X3, double energy,
                     const LevelCurveOptions& opts = {});

// Launch-direction geometry in the tangent space at A: the orthonormal frame
// tau_i(A) and the coefficient data of the distinguished sets in normalized
// coordinates xi_hat (pressureless quadric, rigid ellipse, invariant-manifold
// hyperbola).
struct TangentReport {
  bool at_so2 = false;
  double q1 = 0.0;
  double kappa = 0.0;
  std::array<Mat2, 3> tau{};

  // Quadric a1 xh1^2 + a2 xh2^2 + a3 xh3^2 + c = 0 describing vanishing
  // pressure; {a1, a2, a3, c}.
  std::array<double, 4> pressureless_quadric{};
  // Rigid set {xh1 = 0, r2 xh2^2 + r3 xh3^2 = 2 kappa}; empty on the
  // rotation subgroup (where only the tau3 span gives rigid rotations).
  bool has_rigid_set = false;
  std::array<double, 2> rigid_coeffs{};
  // Invariant-manifold set {xh1^2/2 + kappa q1^2 = q1^2 xh3^2 / 4, xh2 = 0};
  // empty on the rotation subgroup.
  bool has_invariant_manifold_set = false;

  Vec3 xi_hat(const Mat2& B) const;
  double pressureless_residual(const Mat2& B) const;
  // (xh1, r2 xh2^2 + r3 xh3^2 - 2 kappa); both zero iff rigid.
  std::array<double, 2> rigid_residuals(const Mat2& B) const;
  // (xh1^2/2 + kappa q1^2 - q1^2 xh3^2/4, xh2); both zero iff on the
  // invariant manifold of the rigid rotations.
  std::array<double, 2> manifold_residuals(const Mat2& B) const;
};

TangentReport tangent_launcher(const Mat2& A, double kappa,
                               double tol = kMembershipTol);

}  // namespace sl2flow
