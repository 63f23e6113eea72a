#include "sl2flow/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <future>
#include <thread>

#include "sl2flow/asymptotics.hpp"
#include "sl2flow/charts.hpp"
#include "sl2flow/classify.hpp"
#include "sl2flow/dynamics.hpp"
#include "sl2flow/errors.hpp"
#include "sl2flow/physics.hpp"
#include "sl2flow/random.hpp"

namespace sl2flow {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.4142135623730951;

double sq(double v) { return v * v; }

double rel(double got, double want) {
  return std::abs(got - want) / std::max({1.0, std::abs(got), std::abs(want)});
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

// Worst-case tracker with a one-line summary.
struct Worst {
  double value = 0.0;
  void feed(double v) { value = std::max(value, v); }
};

double wrap_mod(double a) {
  const double two_pi = 2.0 * kPi;
  a = std::fmod(a, two_pi);
  if (a < 0.0) a += two_pi;
  return std::min(a, two_pi - a);
}

// --- criterion bodies ------------------------------------------------------

CriterionResult run_algebra(const VerifyOptions& opts) {
  Sampler rng(opts.seed * 1000 + 1);
  Worst worst;

  // Exact basis relations.
  worst.feed(std::abs(inner(kRot * kRot + kId, kRot * kRot + kId)));
  worst.feed(norm(kDiag * kDiag - kId));
  worst.feed(norm(kOff * kOff - kId));
  worst.feed(norm(kRot * kDiag - kOff));
  worst.feed(norm(kOff * kDiag - kRot));
  worst.feed(norm(kOff * kRot - kDiag));

  for (int i = 0; i < 10000; ++i) {
    const Mat2 a = rng.mat2(3.0), b = rng.mat2(3.0), c = rng.mat2(3.0);
    worst.feed(rel(inner(a * b, c), inner(b, a.transpose() * c)));
    worst.feed(rel(inner(a * b, c), inner(a, c * b.transpose())));
    worst.feed(rel(det2(a), 0.5 * inner(a, cofactor(a))));
    worst.feed(rel(norm_sq(cofactor(a)), norm_sq(a)));
    worst.feed(rel(inner(cofactor(a), b), inner(a, cofactor(b))));
    const double lhs = inner(a, b) * inner(cofactor(a), b) +
                       inner(kRot * a, b) * inner(a * kRot, b);
    const double rhs = 0.5 * inner(cofactor(a), a) * norm_sq(b) +
                       0.5 * inner(cofactor(b), b) * norm_sq(a);
    worst.feed(rel(lhs, rhs));
    worst.feed(rel(norm_sq(rng.so2() * a * rng.so2()), norm_sq(a)));
  }

  CriterionResult r;
  r.measured = worst.value;
  r.threshold = 1e-12;
  r.passed = r.measured <= r.threshold;
  r.details = fmt("max_relative_error=%.3e over 10^4 draws", worst.value);
  return r;
}

CriterionResult run_charts(const VerifyOptions& opts) {
  Sampler rng(opts.seed * 1000 + 2);
  Worst det_w, round_w, metric_w, corr_w;

  for (int i = 0; i < 2000; ++i) {
    const Vec3 x = rng.vec3(10.0);
    det_w.feed(std::abs(det2(phi(x)) - 1.0));
  }
  for (int i = 0; i < 500; ++i) {
    const Vec3 x = rng.vec3(3.0);
    const Vec3 back = phi_inverse(phi(x));
    round_w.feed(std::abs(back[0] - x[0]));
    round_w.feed(std::abs(back[1] - x[1]));
    round_w.feed(wrap_mod(back[2] - x[2]));
  }
  for (int i = 0; i < 200; ++i) {
    const Vec3 x = rng.vec3(3.0);
    std::array<Mat2, 3> fd{};
    const double h = 1e-5;
    for (int c = 0; c < 3; ++c) {
      Vec3 xp = x, xm = x;
      xp[c] += h;
      xm[c] -= h;
      fd[c] = (phi(xp) - phi(xm)) / (2.0 * h);
    }
    const Mat3 g = metric_g(x);
    for (int a = 0; a < 3; ++a) {
      for (int c = 0; c < 3; ++c) {
        metric_w.feed(std::abs(g[a][c] - inner(fd[a], fd[c])));
      }
    }
  }
  for (int i = 0; i < 500; ++i) {
    const Vec3 x = rng.vec3(3.0);
    const Vec3 p = rng.vec3(3.0);
    const Invariants inv = invariants_of(ambient_from_chart({x, p}), 1.0);
    corr_w.feed(std::abs(inv.X2 - (x[0] * p[1] - x[1] * p[0])));
    corr_w.feed(std::abs(inv.X3 - p[2]));
  }
  for (int i = 0; i < 500; ++i) {
    ReducedState rs;
    rs.regime = Regime::X2NonZero;
    rs.q = {rng.uniform(0.1, 2.5), rng.angle(), rng.angle()};
    rs.xi = rng.vec3(2.0);
    const Invariants inv = invariants_of(reduced_to_ambient(rs), 1.0);
    corr_w.feed(std::abs(inv.X2 - rs.xi[1]));
    corr_w.feed(std::abs(inv.X3 - rs.xi[2]));
  }

  CriterionResult r;
  r.measured = std::max({det_w.value / 1e-12, round_w.value / 1e-10,
                         metric_w.value / 1e-6, corr_w.value / 1e-10});
  r.threshold = 1.0;
  r.passed = r.measured <= r.threshold;
  r.details =
      fmt("det_defect=%.3e roundtrip=%.3e metric_vs_fd=%.3e invariants=%.3e",
          det_w.value, round_w.value, metric_w.value, corr_w.value);
  return r;
}

std::vector<PhaseState> conservation_states(std::uint64_t seed) {
  Sampler rng(seed * 1000 + 3);
  std::vector<PhaseState> states;
  for (int i = 0; i < 50; ++i) states.push_back(rng.d_state());
  return states;
}

CriterionResult run_conservation(const VerifyOptions& opts) {
  const auto states = conservation_states(opts.seed);
  const auto times = linspace(0.0, 100.0, 201);
  Worst drift_w, det_w;
  for (double kappa : {0.0, 1.0}) {
    const auto trajs =
        integrate_batch(states, kappa, times, {}, opts.parallelism);
    for (const auto& traj : trajs) {
      for (const auto& smp : traj.samples) {
        drift_w.feed(smp.invariant_drift[0]);
        drift_w.feed(smp.invariant_drift[1]);
        drift_w.feed(smp.invariant_drift[2]);
        det_w.feed(smp.det_defect);
      }
    }
  }
  CriterionResult r;
  r.measured = std::max(drift_w.value, det_w.value);
  r.threshold = 1e-8;
  r.passed = r.measured <= r.threshold;
  r.details = fmt("max_drift=%.3e max_det_defect=%.3e (50 states x kappa {0,1})",
                  drift_w.value, det_w.value);
  return r;
}

CriterionResult run_closed_form(const VerifyOptions&) {
  IntegrateOptions io;
  io.allow_closed_form = false;

  // Rigid rotation U(2t), ten periods of pi.
  Worst rot_w;
  {
    const Trajectory traj = integrate({kId, kRot * 2.0}, 1.0,
                                      linspace(0.0, 10.0 * kPi, 401), io);
    for (const auto& smp : traj.samples) {
      rot_w.feed(norm(smp.state.A - rotation(2.0 * smp.t)));
    }
  }
  // Pressureless oscillator at kappa = 1 over [0, 4 pi].
  Worst osc_w;
  {
    const Mat2 b0 = kRot * kSqrt2 + kDiag;
    const Trajectory traj =
        integrate({kId, b0}, 1.0, linspace(0.0, 4.0 * kPi, 201), io);
    for (const auto& smp : traj.samples) {
      osc_w.feed(norm(smp.state.A -
                      (kId * std::cos(smp.t) + b0 * std::sin(smp.t))));
    }
  }
  // Straight shear line over [0, 100].
  Worst line_w;
  {
    const Mat2 b0 = kRot + kOff;
    const Trajectory traj =
        integrate({kId, b0}, 0.0, linspace(0.0, 100.0, 101), io);
    for (const auto& smp : traj.samples) {
      line_w.feed(norm(smp.state.A - Mat2{1.0, 0.0, 2.0 * smp.t, 1.0}));
    }
  }

  CriterionResult r;
  r.measured = std::max({rot_w.value / 1e-8, osc_w.value / 1e-8,
                         line_w.value / 1e-10});
  r.threshold = 1.0;
  r.passed = r.measured <= r.threshold;
  r.details = fmt("rotation=%.3e oscillator=%.3e shear_line=%.3e",
                  rot_w.value, osc_w.value, line_w.value);
  return r;
}

CriterionResult run_equivalence(const VerifyOptions& opts) {
  Sampler rng(opts.seed * 1000 + 5);
  const auto times = linspace(0.0, 10.0, 41);
  IntegrateOptions io;
  io.allow_closed_form = false;
  Worst polar_w, axis_w;

  for (int i = 0; i < 20; ++i) {
    ReducedState rs;
    rs.regime = Regime::X2NonZero;
    rs.q = {rng.uniform(0.4, 1.6), rng.angle(), rng.angle()};
    rs.xi = {rng.uniform(-1, 1), rng.uniform(0.3, 1.5), rng.uniform(-2, 2)};
    const double kappa = (i % 2 == 0) ? 1.0 : 0.0;
    const Trajectory ta = integrate(reduced_to_ambient(rs), kappa, times, io);
    const Trajectory tr = integrate_reduced(rs, kappa, times, io);
    for (std::size_t k = 0; k < times.size(); ++k) {
      polar_w.feed(norm(ta.samples[k].state.A - tr.samples[k].state.A));
    }
  }
  for (int i = 0; i < 20; ++i) {
    ReducedState rz;
    rz.regime = Regime::X2Zero;
    const double q2 = rng.angle();
    rz.q = {rng.uniform(-1.5, 1.5), q2, rng.angle()};
    rz.xi = {rng.uniform(-1, 1), q2, rng.uniform(-2, 2)};
    const double kappa = (i % 2 == 0) ? 1.0 : 0.0;
    const Trajectory ta = integrate(reduced_to_ambient(rz), kappa, times, io);
    const Trajectory tr = integrate_reduced(rz, kappa, times, io);
    for (std::size_t k = 0; k < times.size(); ++k) {
      axis_w.feed(norm(ta.samples[k].state.A - tr.samples[k].state.A));
    }
  }

  CriterionResult r;
  r.measured = std::max(polar_w.value, axis_w.value);
  r.threshold = 1e-6;
  r.passed = r.measured <= r.threshold;
  r.details = fmt("ambient_vs_polar=%.3e ambient_vs_axis=%.3e (20 cases each)",
                  polar_w.value, axis_w.value);
  return r;
}

CriterionResult run_multiplier(const VerifyOptions& opts) {
  const auto states = conservation_states(opts.seed);
  const auto times = linspace(0.0, 100.0, 201);
  Worst id_w;
  int sign_violations = 0;
  for (double kappa : {0.0, 1.0}) {
    const auto trajs =
        integrate_batch(states, kappa, times, {}, opts.parallelism);
    for (const auto& traj : trajs) {
      const double disc = traj.initial.pressure_discriminant();
      const double want_sign = disc > 0.0 ? 1.0 : -1.0;
      for (const auto& smp : traj.samples) {
        id_w.feed(std::abs(smp.lambda - multiplier_from_invariants(
                                            traj.initial,
                                            norm_sq(smp.state.A))));
        if (std::abs(smp.lambda) > 1e-10 * std::max(1.0, traj.initial.X1) &&
            smp.lambda * want_sign < 0.0) {
          ++sign_violations;
        }
      }
    }
  }
  CriterionResult r;
  r.measured = id_w.value;
  r.threshold = 1e-8;
  r.passed = r.measured <= r.threshold && sign_violations == 0;
  r.details = fmt("max_identity_residual=%.3e sign_violations=%d", id_w.value,
                  sign_violations);
  return r;
}

// Grid search refined by a Richardson-extrapolated parabolic vertex.
double grid_min(const std::function<double(double)>& f, double a, double b) {
  const int n = 2000;
  double best = a, fbest = f(a);
  for (int i = 1; i <= n; ++i) {
    const double x = a + (b - a) * i / n;
    if (f(x) < fbest) {
      fbest = f(x);
      best = x;
    }
  }
  auto vertex = [&](double m, double h) {
    const double fp = f(m + h), fm = f(m - h), f0 = f(m);
    return m - 0.5 * h * (fp - fm) / (fp - 2.0 * f0 + fm);
  };
  double m = best;
  for (int round = 0; round < 3; ++round) {
    m = (4.0 * vertex(m, 5e-4) - vertex(m, 1e-3)) / 3.0;
  }
  return m;
}

CriterionResult run_classification(const VerifyOptions&) {
  int flip_failures = 0;

  // Homoclinic detection flips across X3^2 = 8 kappa at offset 1e-6.
  for (double kappa : {0.5, 1.0, 2.0}) {
    const double x3_hi = std::sqrt(8.0 * kappa * (1.0 + 1e-6));
    const double x3_lo = std::sqrt(8.0 * kappa * (1.0 - 1e-6));
    if (critical_points(kappa, 0.0, x3_hi).size() != 3) ++flip_failures;
    if (critical_points(kappa, 0.0, x3_lo).size() != 1) ++flip_failures;
    const double lobe = std::sqrt((0.25 * sq(x3_hi) - 2.0 * kappa) / kappa);
    const PhaseState above =
        build_homoclinic_data(kappa, x3_hi, 0.5 * lobe, -1);
    if (classify(above, kappa).kind != OrbitKind::Homoclinic) ++flip_failures;
    try {
      build_homoclinic_data(kappa, x3_lo, 0.5 * lobe, -1);
      ++flip_failures;  // must refuse below the bifurcation
    } catch (const ParameterOutOfRange&) {
    }
  }

  // Well centers against an independent grid search.
  Worst center_w;
  for (const auto& [kappa, x3] : std::initializer_list<std::array<double, 2>>{
           {1.0, 4.0}, {1.0, 3.2}, {0.5, 3.0}, {2.0, 6.0}}) {
    const double analytic =
        std::sqrt(std::abs(x3) / std::sqrt(2.0 * kappa) - 2.0);
    const double numeric = grid_min(
        [&, x3 = x3, kappa = kappa](double q) {
          return h_zero(q, 0.0, x3, kappa);
        },
        0.05, 4.0);
    center_w.feed(std::abs(analytic - numeric));
  }

  // States satisfying both rigid conditions stay rigid for 50 time units.
  Worst rigid_w;
  for (const auto& [q1, xi2] : std::initializer_list<std::array<double, 2>>{
           {1.0, 1.0}, {1.3, 0.8}, {0.8, 0.5}}) {
    const double kappa = 1.0;
    const double xi3 = std::sqrt(
        (2.0 * kappa - sq(xi2) / sq(sq(q1))) * sq(2.0 + sq(q1)));
    const ReducedState rs{{q1, 0, 0}, {0.0, xi2, xi3}, Regime::X2NonZero};
    const PhaseState s = reduced_to_ambient(rs);
    if (classify(s, kappa).kind != OrbitKind::Rigid) ++flip_failures;
    const Trajectory traj = integrate(s, kappa, linspace(0.0, 50.0, 201));
    for (const auto& smp : traj.samples) {
      rigid_w.feed(std::abs(norm_sq(smp.state.A) - norm_sq(s.A)));
    }
  }

  CriterionResult r;
  r.measured = std::max({static_cast<double>(flip_failures),
                         center_w.value / 1e-8, rigid_w.value / 1e-6});
  r.threshold = 1.0;
  r.passed = r.measured <= r.threshold;
  r.details = fmt("flip_failures=%d center_vs_grid=%.3e rigid_norm_drift=%.3e",
                  flip_failures, center_w.value, rigid_w.value);
  return r;
}

CriterionResult run_homoclinic_decay(const VerifyOptions&) {
  const double kappa = 1.0, x3 = 4.0;
  const double alpha = std::sqrt(0.25 * sq(x3) - 2.0 * kappa);
  const PhaseState s = build_homoclinic_data(kappa, x3, 1.0, -1);

  const ConvergenceReport fwd =
      fit_rotation_convergence(s, kappa, Side::Forward);
  const ConvergenceReport bwd =
      fit_rotation_convergence(s, kappa, Side::Backward);
  const HomoclinicPhaseCheck phase = homoclinic_phase_shift(s, kappa);

  const double rate_err =
      std::max(std::abs(fwd.mu_fitted - alpha), std::abs(bwd.mu_fitted - alpha)) /
      alpha;
  CriterionResult r;
  r.measured = std::max(rate_err / 0.1, std::abs(phase.mismatch) / 1e-3);
  r.threshold = 1.0;
  r.passed = r.measured <= r.threshold && fwd.sign_ok && bwd.sign_ok;
  r.details = fmt(
      "mu_fwd=%.6f mu_bwd=%.6f alpha=%.6f phase_shift_mismatch=%.3e",
      fwd.mu_fitted, bwd.mu_fitted, alpha, phase.mismatch);
  return r;
}

CriterionResult run_linear_asymptote(const VerifyOptions& opts) {
  Sampler rng(opts.seed * 1000 + 9);
  Worst infid_w;
  double worst_exponent = -std::numeric_limits<double>::infinity();
  int count = 0;
  while (count < 10) {
    const PhaseState s = rng.d_state();
    if (classify(s, 0.0).kind != OrbitKind::UnboundedBothEnds) continue;
    if (std::abs(invariants_of(s, 0.0).pressure_discriminant()) < 1e-3) {
      continue;  // keep the draws genuinely generic
    }
    ++count;
    const AsymptoteReport rep =
        fit_linear_asymptote(s, 0.0, Side::Forward, opts.horizon);
    for (double v : rep.limit_identity_residuals) infid_w.feed(std::abs(v));
    worst_exponent = std::max(worst_exponent, rep.residual_decay_exponent);
  }
  CriterionResult r;
  r.measured = infid_w.value;
  r.threshold = 1e-5;
  r.passed = r.measured <= r.threshold && worst_exponent <= -0.8;
  r.details = fmt("max_limit_identity_residual=%.3e worst_decay_exponent=%.3f",
                  infid_w.value, worst_exponent);
  return r;
}

CriterionResult run_recurrence(const VerifyOptions& opts) {
  Sampler rng(opts.seed * 1000 + 10);
  Worst ratio_w;
  int failures = 0;
  for (int i = 0; i < 5; ++i) {
    ReducedState rs;
    rs.regime = Regime::X2NonZero;
    rs.q = {rng.uniform(0.8, 1.5), rng.angle(), rng.angle()};
    rs.xi = {rng.uniform(-0.6, 0.6), rng.uniform(0.4, 1.2),
             rng.uniform(1.0, 2.2)};
    const PhaseState s = reduced_to_ambient(rs);
    if (classify(s, 1.0).kind != OrbitKind::PeriodicRadius) {
      ++failures;
      continue;
    }
    for (unsigned N : {5u, 10u, 20u}) {
      const RecurrenceResult res = recurrence_search(s, 1.0, N);
      ratio_w.feed(res.bound_ratio);
      if (!res.within_bound || res.ell > N * N) ++failures;
    }
  }
  CriterionResult r;
  r.measured = ratio_w.value;
  r.threshold = 1.0;
  r.passed = failures == 0 && r.measured <= r.threshold;
  r.details = fmt("worst_bound_ratio=%.3f failures=%d (5 orbits x N {5,10,20})",
                  ratio_w.value, failures);
  return r;
}

CriterionResult run_portraits(const VerifyOptions&) {
  using T = CurveTopology;
  struct Fig {
    const char* name;
    ReducedHamiltonian which;
    double kappa, X2, X3, energy;
    std::vector<T> expect;
  };

  const double emin1 = h_tilde(std::pow(2.0, -0.25), 0.0, 1.0, 0.0, 1.0);
  const double emin3 = 4.0 * kSqrt2 - 1.0;  // two-well minimum for X3 = 4
  const std::vector<Fig> figs = {
      // Closed curves around the radial minimizer.
      {"fig1", ReducedHamiltonian::Htilde, 1.0, 1.0, 0.0, emin1,
       {T::Point}},
      {"fig1", ReducedHamiltonian::Htilde, 1.0, 1.0, 0.0, emin1 + 0.5,
       {T::Closed}},
      {"fig1", ReducedHamiltonian::Htilde, 1.0, 1.0, 0.0, emin1 + 2.0,
       {T::Closed}},
      // Unbounded level sets of the free radial motion with spin.
      {"fig2", ReducedHamiltonian::Htilde, 0.0, 1.0, 0.0, 0.5,
       {T::Unbounded}},
      {"fig2", ReducedHamiltonian::Htilde, 0.0, 1.0, 0.0, 1.5,
       {T::Unbounded}},
      // Double well with the separatrix.
      {"fig3", ReducedHamiltonian::H0, 1.0, 0.0, 4.0, 0.5 * (emin3 + 5.0),
       {T::Closed, T::Closed}},
      {"fig3", ReducedHamiltonian::H0, 1.0, 0.0, 4.0, 5.0,
       {T::Point, T::Homoclinic, T::Homoclinic}},
      {"fig3", ReducedHamiltonian::H0, 1.0, 0.0, 4.0, 6.0, {T::Closed}},
      // Single well.
      {"fig4", ReducedHamiltonian::H0, 1.0, 0.0, 2.0, 2.0, {T::Point}},
      {"fig4", ReducedHamiltonian::H0, 1.0, 0.0, 2.0, 2.5, {T::Closed}},
      {"fig4", ReducedHamiltonian::H0, 1.0, 0.0, 2.0, 3.5, {T::Closed}},
      // Saddle with stable/unstable manifolds.
      {"fig5", ReducedHamiltonian::H0, 0.0, 0.0, 2.0, 0.6,
       {T::Unbounded, T::Unbounded}},
      {"fig5", ReducedHamiltonian::H0, 0.0, 0.0, 2.0, 1.0,
       {T::Point, T::Unbounded, T::Unbounded, T::Unbounded, T::Unbounded}},
      {"fig5", ReducedHamiltonian::H0, 0.0, 0.0, 2.0, 1.5,
       {T::Unbounded, T::Unbounded}},
      // Line of equilibria.
      {"fig6", ReducedHamiltonian::H0, 0.0, 0.0, 0.0, 0.0,
       {T::EquilibriumLine}},
      {"fig6", ReducedHamiltonian::H0, 0.0, 0.0, 0.0, 0.5,
       {T::Unbounded, T::Unbounded}},
      {"fig6", ReducedHamiltonian::H0, 0.0, 0.0, 0.0, 1.0,
       {T::Unbounded, T::Unbounded}},
  };

  int mismatches = 0;
  Worst energy_w;
  std::string bad;
  for (const auto& fig : figs) {
    const LevelSet ls =
        level_curve(fig.which, fig.kappa, fig.X2, fig.X3, fig.energy);
    std::vector<T> got;
    for (const auto& curve : ls.curves) {
      got.push_back(curve.topology);
      for (const auto& p : curve.points) {
        const double h = fig.which == ReducedHamiltonian::Htilde
                             ? h_tilde(p[0], p[1], fig.X2, fig.X3, fig.kappa)
                             : h_zero(p[0], p[1], fig.X3, fig.kappa);
        energy_w.feed(std::abs(h - fig.energy));
      }
    }
    std::vector<T> want = fig.expect;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    if (got != want) {
      ++mismatches;
      bad += fmt(" %s@%.3f", fig.name, fig.energy);
    }
  }

  CriterionResult r;
  r.measured = std::max(static_cast<double>(mismatches),
                        energy_w.value / 1e-10);
  r.threshold = 1.0;  // no mismatches, on-curve residual within 1e-10
  r.passed = mismatches == 0 && energy_w.value <= 1e-10;
  r.details = fmt("topology_mismatches=%d max_energy_residual=%.3e%s",
                  mismatches, energy_w.value, bad.c_str());
  return r;
}

struct Criterion {
  int id;
  const char* name;
  const char* checks;
  double runtime_limit;  // seconds
  CriterionResult (*run)(const VerifyOptions&);
};

const Criterion kCriteria[] = {
    {1, "algebra",
     "inner-product, cofactor, determinant and polarization identities on "
     "random matrices",
     1.0, run_algebra},
    {2, "charts",
     "chart lands on det = 1, inverse round-trip, metric vs finite "
     "differences, invariant coordinates",
     5.0, run_charts},
    {3, "conservation",
     "X1, X2, X3 and det A conserved to 1e-8 over 100 time units",
     60.0, run_conservation},
    {4, "closed_form",
     "integrator reproduces rigid rotation, pressureless oscillator and "
     "straight shear line",
     10.0, run_closed_form},
    {5, "equivalence",
     "ambient and reduced formulations produce the same deformation history",
     30.0, run_equivalence},
    {6, "multiplier",
     "multiplier equals its invariant closed form and the pressure sign "
     "never flips",
     60.0, run_multiplier},
    {7, "classification",
     "homoclinic bifurcation flips at X3^2 = 8 kappa, centers match grid "
     "search, rigid states stay rigid",
     30.0, run_classification},
    {8, "homoclinic_decay",
     "exponential approach to the rotating disk at the saddle rate, with "
     "matching total phase shift",
     10.0, run_homoclinic_decay},
    {9, "linear_asymptote",
     "unbounded motion approaches a straight line whose limit satisfies the "
     "degeneracy identities",
     60.0, run_linear_asymptote},
    {10, "recurrence",
     "pigeonhole near-returns within 8 pi |A| / N for quasi-periodic orbits",
     120.0, run_recurrence},
    {11, "portraits",
     "level-curve extraction reproduces the six phase-portrait topologies",
     30.0, run_portraits},
};

}  // namespace

std::vector<std::string> acceptance_suite_names() {
  std::vector<std::string> names;
  for (const auto& c : kCriteria) names.push_back(c.name);
  return names;
}

std::vector<CriterionResult> run_acceptance(const VerifyOptions& opts) {
  std::vector<const Criterion*> selected;
  for (const auto& c : kCriteria) {
    if (opts.suites.empty() ||
        std::find(opts.suites.begin(), opts.suites.end(), c.name) !=
            opts.suites.end()) {
      selected.push_back(&c);
    }
  }

  // Criteria run concurrently in isolated buffers, merged in id order.
  std::vector<std::future<CriterionResult>> futures;
  futures.reserve(selected.size());
  for (const Criterion* c : selected) {
    futures.push_back(std::async(std::launch::async, [c, &opts] {
      const auto start = std::chrono::steady_clock::now();
      CriterionResult r;
      try {
        r = c->run(opts);
      } catch (const std::exception& e) {
        r.passed = false;
        r.measured = std::numeric_limits<double>::infinity();
        r.threshold = 0.0;
        r.details = std::string("exception: ") + e.what();
      }
      r.id = c->id;
      r.name = c->name;
      r.checks = c->checks;
      const std::chrono::duration<double> elapsed =
          std::chrono::steady_clock::now() - start;
      if (elapsed.count() > c->runtime_limit) {
        r.passed = false;
        r.details += fmt(" [runtime %.1fs exceeded %.0fs budget]",
                         elapsed.count(), c->runtime_limit);
      }
      return r;
    }));
  }

  std::vector<CriterionResult> results;
  results.reserve(futures.size());
  for (auto& f : futures) results.push_back(f.get());
  std::sort(results.begin(), results.end(),
            [](const CriterionResult& a, const CriterionResult& b) {
              return a.id < b.id;
            });
  return results;
}

}  // namespace sl2flow
