#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "sl2flow/charts.hpp"
#include "sl2flow/mat2.hpp"
#include "sl2flow/state.hpp"

namespace sl2flow {

// Conserved quantities of the motion: X1 is the energy, X2 and X3 the
// rotational momenta of the right and left circle actions. X1 >= kappa on
// valid states, and X2 = 0 whenever A is a rotation.
struct Invariants {
  double kappa = 0.0;
  double X1 = 0.0;
  double X2 = 0.0;
  double X3 = 0.0;

  // 2*X1 + X2^2 - X3^2; zero exactly on the vanishing-pressure solutions.
  double pressure_discriminant() const { return 2.0 * X1 + X2 * X2 - X3 * X3; }
};

Invariants invariants_of(const PhaseState& s, double kappa);

// Multiplier enforcing det A = 1: Lambda(A,B) = 2 (kappa - det B) / |A|^2.
// Equals half the pressure amplitude at the ellipse center.
double lagrange_multiplier(const PhaseState& s, double kappa);

// Equivalent closed form along exact trajectories:
// (4 X1 + 2 X2^2 - 2 X3^2) / |A|^4.
double multiplier_from_invariants(const Invariants& inv, double norm_a_sq);

// First-order right-hand sides of the four equivalent formulations.
PhaseState rhs_ambient(const PhaseState& s, double kappa);
ChartPoint rhs_hamsys(const ChartPoint& cp, double kappa);
ReducedState rhs_hamsys2(const ReducedState& rs, double kappa);
ReducedState rhs_hamsys3(const ReducedState& rs, double kappa);

// Hamiltonians.
double hamiltonian_chart(const ChartPoint& cp, double kappa);
double h_tilde(double q1, double xi1, double X2, double X3, double kappa);
double h_zero(double q1, double xi1, double X3, double kappa);
double hamiltonian_reduced(const ReducedState& rs, double kappa);

enum class Formulation { Ambient, Hamsys, Hamsys2, Hamsys3 };

struct IntegrateOptions {
  // Defaults keep invariant drift two digits below the 1e-8 conservation
  // gates over 100-unit runs.
  double rtol = 1e-12;
  double atol = 1e-13;
  // Throw ToleranceExceeded when any invariant drifts beyond this budget.
  double max_drift = 1e-6;
  // Optional post-step renormalization A <- A / sqrt(det A) for very long
  // ambient runs. Off by default; the drift and det monitors then measure
  // the raw flow.
  bool renormalize = false;
  // Evaluate the linear closed form instead of integrating when the initial
  // data lies on the vanishing-pressure manifold.
  bool allow_closed_form = true;
  // Cap on the step length; unbounded steps degrade the quartic dense
  // output exactly where the flow straightens out.
  double h_max = 1.0;
  std::size_t max_steps = 100000000;
};

struct TrajectorySample {
  double t = 0.0;
  PhaseState state;                           // ambient (A, Adot)
  double lambda = 0.0;                        // multiplier at the sample
  std::array<double, 3> invariant_drift{};    // |X_i(t) - X_i(0)|
  double det_defect = 0.0;                    // |det A - 1|
};

struct Trajectory {
  Formulation formulation = Formulation::Ambient;
  double kappa = 0.0;
  Invariants initial;
  bool closed_form = false;
  std::vector<TrajectorySample> samples;
  // Native coordinates parallel to samples for the reduced/chart runs.
  std::vector<ReducedState> reduced;
  std::vector<ChartPoint> chart;
};

// Integrates from initial data at t = 0 and reports samples at the requested
// times (any signs; backward and forward runs are stitched at 0). Reduced and
// chart formulations reconstruct ambient samples on demand.
Trajectory integrate(const PhaseState& init, double kappa,
                     const std::vector<double>& times,
                     const IntegrateOptions& opts = {});
Trajectory integrate_chart(const ChartPoint& init, double kappa,
                           const std::vector<double>& times,
                           const IntegrateOptions& opts = {});
Trajectory integrate_reduced(const ReducedState& init, double kappa,
                             const std::vector<double>& times,
                             const IntegrateOptions& opts = {});

// Lower bound certificate for q1 along X2NonZero trajectories; reaching half
// of it signals an integration fault, not physics.
double q1_lower_bound(const Invariants& inv);

// Convenience samplers.
std::vector<double> linspace(double t0, double t1, std::size_t n);

// Runs one integration per initial state, at most `parallelism` at a time
// (0 = hardware concurrency). States evolve independently.
std::vector<Trajectory> integrate_batch(const std::vector<PhaseState>& inits,
                                        double kappa,
                                        const std::vector<double>& times,
                                        const IntegrateOptions& opts = {},
                                        int parallelism = 0);

}  // namespace sl2flow
