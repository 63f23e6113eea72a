#pragma once

#include <array>
#include <optional>

#include "sl2flow/dynamics.hpp"
#include "sl2flow/mat2.hpp"
#include "sl2flow/state.hpp"

namespace sl2flow {

enum class Side { Forward, Backward };

// Initial data on the invariant manifold of the rigid rotation with spin X3:
// energy level X1 = kappa + X3^2/4 with X2 = 0, entered at q1 = q1_start with
// the chosen sign of the radial momentum. For kappa > 0 this is the
// homoclinic manifold (requires X3^2 > 8 kappa, q1_start within the lobe);
// for kappa = 0 it is the stable (xi1 < 0) or unstable (xi1 > 0) manifold.
PhaseState build_rotation_manifold_data(double kappa, double X3,
                                        double q1_start, int xi1_sign);

// kappa > 0 specialization; throws ParameterOutOfRange when X3^2 <= 8 kappa
// or q1_start lies beyond the homoclinic lobe.
PhaseState build_homoclinic_data(double kappa, double X3, double q1_start,
                                 int xi1_sign = -1);

struct ConvergenceReport {
  Side side = Side::Forward;
  double theta = 0.0;      // asymptotic phase against U(X3 t / 2)
  double mu_fitted = 0.0;  // log-linear decay rate of |A(t) - U(...)|
  double mu_bound = 0.0;   // admissible rate: sqrt(X3^2-8k)/2, or |X3|/2 at k=0
  double j0_final_residual = 0.0;
  double j1_decay_ratio = 0.0;  // derivative residual, end of window / start
  bool sign_ok = false;         // sign <A, Adot> matches the converging side
};

// Fits the exponential approach to the rotating-disk solution on the given
// side. The data must converge there: homoclinic (kappa > 0), or on the
// stable/unstable manifold (kappa = 0). Throws NotConvergent otherwise.
ConvergenceReport fit_rotation_convergence(const PhaseState& init,
                                           double kappa, Side side,
                                           double window = 25.0);

// Total phase shift across a homoclinic pass: the fitted theta_+ - theta_-
// against the quadrature -X3/2 * integral of q1^2/(2+q1^2). `mismatch` is the
// difference wrapped to (-pi, pi].
struct HomoclinicPhaseCheck {
  double theta_plus = 0.0;
  double theta_minus = 0.0;
  double fitted_shift = 0.0;
  double quadrature_shift = 0.0;
  double mismatch = 0.0;
};

HomoclinicPhaseCheck homoclinic_phase_shift(const PhaseState& init,
                                            double kappa,
                                            double window = 25.0);

// Linear asymptote A(t) ~ B_inf t + A_inf of an unbounded kappa = 0 motion,
// estimated from the acceleration quadrature with a fitted t^{-3} tail.
struct AsymptoteReport {
  Mat2 A_inf;
  Mat2 B_inf;
  double residual_decay_exponent = 0.0;     // fitted slope of log residual
  std::array<double, 3> invariant_residuals{};  // X_i(A_inf,B_inf) - X_i
  // <B_inf, cof A_inf>, det B_inf, det A_inf - (X3^2 - X2^2)/(2 X1)
  std::array<double, 3> limit_identity_residuals{};
};

AsymptoteReport fit_linear_asymptote(const PhaseState& init, double kappa,
                                     Side side, double horizon = 1000.0);

// Pigeonhole recurrence certificate: the best shift l <= N^2 of the double
// period and the achieved deviation sup_t |A(2lT + t) - A(t)| over a sampled
// grid, checked against 8 pi |A(t)| / N pointwise.
struct RecurrenceResult {
  unsigned ell = 0;
  double max_deviation = 0.0;
  double bound = 0.0;        // 8 pi max|A| / N over the base grid
  double bound_ratio = 0.0;  // worst |A(2lT+t)-A(t)| / (8 pi |A(t)|/N)
  bool within_bound = false;
};

RecurrenceResult recurrence_search(const PhaseState& s, double kappa,
                                   unsigned N,
                                   std::optional<double> period = std::nullopt);

}  // namespace sl2flow
