#include "sl2flow/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sl2flow/charts.hpp"
#include "sl2flow/classify.hpp"
#include "sl2flow/errors.hpp"
#include "sl2flow/ode.hpp"

namespace sl2flow {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sq(double v) { return v * v; }

double wrap_pi(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a - kPi;
}

// Least squares y = slope * x + icept.
struct LineFit {
  double slope = 0.0;
  double icept = 0.0;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  LineFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.icept = (sy - f.slope * sx) / n;
  return f;
}

}  // namespace

PhaseState build_rotation_manifold_data(double kappa, double X3,
                                        double q1_start, int xi1_sign) {
  if (kappa < 0.0 || q1_start <= 0.0) {
    throw ParameterOutOfRange(
        "build_rotation_manifold_data: need kappa >= 0 and q1_start > 0");
  }
  if (kappa > 0.0) {
    if (sq(X3) <= 8.0 * kappa) {
      throw ParameterOutOfRange(
          "build_rotation_manifold_data: X3^2 must exceed 8 kappa");
    }
    const double q1_max = std::sqrt((0.25 * sq(X3) - 2.0 * kappa) / kappa);
    if (q1_start > q1_max * (1.0 + 1e-12)) {
      throw ParameterOutOfRange(
          "build_rotation_manifold_data: q1_start beyond the homoclinic lobe");
    }
  } else if (X3 == 0.0) {
    throw ParameterOutOfRange(
        "build_rotation_manifold_data: X3 must be nonzero when kappa = 0");
  }

  const double energy = kappa + 0.25 * sq(X3);
  const double margin = energy - h_zero(q1_start, 0.0, X3, kappa);
  const double q1sq = sq(q1_start);
  const double xi1_sq =
      std::max(0.0, margin) * 4.0 * (1.0 + q1sq) / (2.0 + q1sq);
  const double xi1 = (xi1_sign < 0 ? -1.0 : 1.0) * std::sqrt(xi1_sq);

  ReducedState rs;
  rs.regime = Regime::X2Zero;
  rs.q = {q1_start, 0.0, 0.0};
  rs.xi = {xi1, 0.0, X3};
  return reduced_to_ambient(rs);
}

PhaseState build_homoclinic_data(double kappa, double X3, double q1_start,
                                 int xi1_sign) {
  if (kappa <= 0.0) {
    throw ParameterOutOfRange("build_homoclinic_data: kappa must be positive");
  }
  return build_rotation_manifold_data(kappa, X3, q1_start, xi1_sign);
}

ConvergenceReport fit_rotation_convergence(const PhaseState& init,
                                           double kappa, Side side,
                                           double window) {
  const OrbitClass oc = classify(init, kappa);
  const bool converges =
      (kappa > 0.0 && oc.kind == OrbitKind::Homoclinic) ||
      (kappa == 0.0 && side == Side::Forward &&
       oc.kind == OrbitKind::UnboundedBackward) ||
      (kappa == 0.0 && side == Side::Backward &&
       oc.kind == OrbitKind::UnboundedForward);
  if (!converges) {
    throw NotConvergent(
        "fit_rotation_convergence: data does not approach a rigid rotation "
        "on the requested side");
  }

  const Invariants inv = invariants_of(init, kappa);
  const double dir = side == Side::Forward ? 1.0 : -1.0;
  const std::size_t n = 1200;
  const std::vector<double> times = side == Side::Forward
                                        ? linspace(0.0, window, n + 1)
                                        : linspace(-window, 0.0, n + 1);
  const Trajectory traj = integrate(init, kappa, times);

  // Samples ordered by distance from t = 0.
  std::vector<TrajectorySample> ordered = traj.samples;
  if (side == Side::Backward) std::reverse(ordered.begin(), ordered.end());

  // The exact orbit approaches the rotation circle forever, but the computed
  // one shadows it only until rounding in the conserved quantities is blown
  // up along the unstable direction (after about |log eps| / mu time units).
  // Everything below therefore works on [0, t*], with t* the closest
  // approach to the rotation set.
  std::size_t closest = 0;
  double min_excess = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= n; ++i) {
    const double excess = 0.5 * norm_sq(ordered[i].state.A) - 1.0;
    if (excess < min_excess) {
      min_excess = excess;
      closest = i;
    }
  }
  if (closest < n / 4) {
    throw NotConvergent(
        "fit_rotation_convergence: no approach to the rotation set");
  }

  // Phase against the reference rotation, unwrapped near closest approach.
  auto phase_of = [&](const PhaseState& s, double t) {
    const Mat2 d = s.A * rotation(-0.5 * inv.X3 * t);
    return std::atan2(inner(d, kRot), inner(d, kId));
  };
  const std::size_t phase_lo = closest > 120 ? closest - 120 : 0;
  std::vector<double> phases;
  double prev = 0.0;
  for (std::size_t i = phase_lo; i <= closest; ++i) {
    const auto& smp = ordered[i];
    double ph = phase_of(smp.state, smp.t);
    if (!phases.empty()) ph = prev + wrap_pi(ph - prev);
    phases.push_back(ph);
    prev = ph;
  }
  double theta = 0.0;
  for (double ph : phases) theta += ph;
  theta = wrap_pi(theta / static_cast<double>(phases.size()));

  ConvergenceReport rep;
  rep.side = side;
  rep.theta = theta;
  rep.mu_bound = kappa > 0.0 ? 0.5 * std::sqrt(sq(inv.X3) - 8.0 * kappa)
                             : 0.5 * std::abs(inv.X3);

  auto residual = [&](const TrajectorySample& smp) {
    return norm(smp.state.A - rotation(0.5 * inv.X3 * smp.t + theta));
  };
  auto residual_deriv = [&](const TrajectorySample& smp) {
    const Mat2 ref = kRot * rotation(0.5 * inv.X3 * smp.t + theta) *
                     (0.5 * inv.X3);
    return norm(smp.state.B - ref);
  };

  // Log-linear fit of the decaying stretch, clear of the initial transient
  // and of the rounding floor at closest approach.
  const double r_floor = std::max(1e-12, 3.0 * residual(ordered[closest]));
  const double r_cap = 0.02 * std::max(1.0, residual(ordered[0]));
  std::vector<double> ts, logs;
  std::size_t fit_first = closest;
  for (std::size_t i = 0; i <= closest; ++i) {
    const double r = residual(ordered[i]);
    if (r > r_floor && r < r_cap) {
      if (ts.empty()) fit_first = i;
      ts.push_back(ordered[i].t);
      logs.push_back(std::log(r));
    }
  }
  if (ts.size() < 8) {
    throw NotConvergent("fit_rotation_convergence: too few usable samples");
  }
  const LineFit lf = fit_line(ts, logs);
  rep.mu_fitted = -dir * lf.slope;
  if (rep.mu_fitted <= 0.0) {
    throw NotConvergent("fit_rotation_convergence: residual does not decay");
  }

  rep.j0_final_residual = residual(ordered[closest]);
  const double j1_start = residual_deriv(ordered[fit_first]);
  const double j1_end = residual_deriv(ordered[closest]);
  rep.j1_decay_ratio = j1_start > 0.0 ? j1_end / j1_start : 0.0;

  // The approach happens with shrinking |A|: <A, Adot> < 0 for t >> 0 on the
  // forward side and > 0 backward. Near closest approach the product sits at
  // rounding level, so only clear violations count.
  rep.sign_ok = true;
  for (std::size_t i = fit_first; i < closest; ++i) {
    const auto& st = ordered[i].state;
    const double tol = 1e-12 * std::max(1.0, norm(st.A) * norm(st.B));
    if (dir * inner(st.A, st.B) > tol) {
      rep.sign_ok = false;
      break;
    }
  }
  return rep;
}

HomoclinicPhaseCheck homoclinic_phase_shift(const PhaseState& init,
                                            double kappa, double window) {
  const ConvergenceReport fwd =
      fit_rotation_convergence(init, kappa, Side::Forward, window);
  const ConvergenceReport bwd =
      fit_rotation_convergence(init, kappa, Side::Backward, window);
  const Invariants inv = invariants_of(init, kappa);

  // Quadrature of q1^2/(2+q1^2) carried as an extra integrated component.
  // Each leg stops at the closest approach to the rotation set (the radial
  // momentum zero inside the wells); past it the computed orbit escapes
  // along the unstable direction while the exact one keeps decaying, and
  // the neglected exact tail is beneath rounding.
  const ReducedState rs0 = ambient_to_reduced(init);
  const double q1_center =
      std::sqrt(std::abs(inv.X3) / std::sqrt(2.0 * kappa) - 2.0);
  auto rhs = [&](double, const StateN<7>& y) {
    const ReducedState rs{{y[0], y[1], y[2]}, {y[3], y[4], y[5]},
                          Regime::X2Zero};
    const ReducedState v = rhs_hamsys3(rs, kappa);
    return StateN<7>{v.q[0],  v.q[1],  v.q[2], v.xi[0], v.xi[1], v.xi[2],
                     sq(y[0]) / (2.0 + sq(y[0]))};
  };
  const StateN<7> y0 = {rs0.q[0],  rs0.q[1],  rs0.q[2], rs0.xi[0],
                        rs0.xi[1], rs0.xi[2], 0.0};
  OdeControl ctl;
  double integral = 0.0;
  for (double dir : {1.0, -1.0}) {
    double xi1_prev = y0[3];
    double leg = 0.0;
    bool stopped = false;
    dopri5<7>(rhs, y0, 0.0, dir * window, ctl,
              [&](const DenseStep<7>& d, double t, const StateN<7>& y) {
                if (y[3] * xi1_prev < 0.0 && std::abs(y[0]) < q1_center) {
                  // Bisect the radial turning point inside the well.
                  double lo = d.t0, hi = d.t1;
                  for (int i = 0; i < 100 && std::abs(hi - lo) > 1e-12; ++i) {
                    const double mid = 0.5 * (lo + hi);
                    if (d.eval(mid)[3] * xi1_prev > 0.0) {
                      lo = mid;
                    } else {
                      hi = mid;
                    }
                  }
                  leg = d.eval(0.5 * (lo + hi))[6];
                  stopped = true;
                  return false;
                }
                xi1_prev = y[3];
                if (t == dir * window) leg = y[6];
                return true;
              });
    (void)stopped;
    integral += dir * leg;
  }

  HomoclinicPhaseCheck out;
  out.theta_plus = fwd.theta;
  out.theta_minus = bwd.theta;
  out.fitted_shift = wrap_pi(fwd.theta - bwd.theta);
  out.quadrature_shift = -0.5 * inv.X3 * integral;
  out.mismatch = wrap_pi(out.fitted_shift - out.quadrature_shift);
  return out;
}

AsymptoteReport fit_linear_asymptote(const PhaseState& init, double kappa,
                                     Side side, double horizon) {
  if (kappa != 0.0) {
    throw ParameterOutOfRange("fit_linear_asymptote: requires kappa = 0");
  }
  const OrbitClass oc = classify(init, kappa);
  const bool unbounded =
      oc.kind == OrbitKind::UnboundedBothEnds ||
      (oc.kind == OrbitKind::UnboundedForward && side == Side::Forward) ||
      (oc.kind == OrbitKind::UnboundedBackward && side == Side::Backward);
  if (!unbounded) {
    throw NotUnbounded(
        "fit_linear_asymptote: trajectory is not unbounded on this side");
  }

  // Time reversal maps the backward problem to the forward one.
  const PhaseState fwd_init =
      side == Side::Forward ? init : PhaseState{init.A, -init.B};

  std::vector<double> times = linspace(0.0, 10.0, 101);
  {
    const std::size_t geo = 240;
    const double ratio = std::pow(horizon / 10.0, 1.0 / static_cast<double>(geo));
    double t = 10.0;
    for (std::size_t i = 0; i < geo; ++i) {
      t *= ratio;
      times.push_back(std::min(t, horizon));
    }
    times.back() = horizon;
  }

  IntegrateOptions opts;
  const Trajectory traj = integrate(fwd_init, 0.0, times, opts);
  const Invariants inv = traj.initial;

  auto accel = [&](const TrajectorySample& smp) {
    return cofactor(smp.state.A) *
           lagrange_multiplier(smp.state, 0.0);
  };

  // Fit t^3 * Addot ~ P + Q/t on the late stretch, entrywise.
  Mat2 P, Q;
  {
    std::vector<double> xs;
    std::vector<std::array<double, 4>> ys;
    for (const auto& smp : traj.samples) {
      if (smp.t < horizon / 8.0) continue;
      const Mat2 a = accel(smp);
      const double t3 = smp.t * smp.t * smp.t;
      xs.push_back(1.0 / smp.t);
      ys.push_back({a.a11 * t3, a.a12 * t3, a.a21 * t3, a.a22 * t3});
    }
    for (int e = 0; e < 4; ++e) {
      std::vector<double> col(ys.size());
      for (std::size_t i = 0; i < ys.size(); ++i) col[i] = ys[i][e];
      const LineFit lf = fit_line(xs, col);
      double* p = e == 0 ? &P.a11 : e == 1 ? &P.a12 : e == 2 ? &P.a21 : &P.a22;
      double* q = e == 0 ? &Q.a11 : e == 1 ? &Q.a12 : e == 2 ? &Q.a21 : &Q.a22;
      *p = lf.icept;
      *q = lf.slope;
    }
  }

  const TrajectorySample& last = traj.samples.back();
  const double T = last.t;
  const Mat2 tail_single = P / (2.0 * T * T) + Q / (3.0 * T * T * T);
  const Mat2 tail_double = P / (2.0 * T) + Q / (6.0 * T * T);

  AsymptoteReport rep;
  rep.B_inf = last.state.B + tail_single;
  rep.A_inf = last.state.A - rep.B_inf * T - tail_double;

  // Decay exponent of |A(t) - (B_inf t + A_inf)| against log(1+t).
  {
    std::vector<double> xs, ys;
    for (const auto& smp : traj.samples) {
      if (smp.t < 5.0) continue;
      const double r = norm(smp.state.A - (rep.B_inf * smp.t + rep.A_inf));
      if (r > 1e-13) {
        xs.push_back(std::log(1.0 + smp.t));
        ys.push_back(std::log(r));
      }
    }
    rep.residual_decay_exponent =
        xs.size() >= 8 ? fit_line(xs, ys).slope
                       : -std::numeric_limits<double>::infinity();
  }

  const Invariants inv_lim =
      invariants_of({rep.A_inf, rep.B_inf}, 0.0);
  rep.invariant_residuals = {inv_lim.X1 - inv.X1, inv_lim.X2 - inv.X2,
                             inv_lim.X3 - inv.X3};
  rep.limit_identity_residuals = {
      inner(rep.B_inf, cofactor(rep.A_inf)), det2(rep.B_inf),
      det2(rep.A_inf) - (sq(inv.X3) - sq(inv.X2)) / (2.0 * inv.X1)};

  if (side == Side::Backward) {
    rep.B_inf = -rep.B_inf;
    // Invariant residuals were computed for the reversed data; X2, X3 flip.
    rep.invariant_residuals[1] = -rep.invariant_residuals[1];
    rep.invariant_residuals[2] = -rep.invariant_residuals[2];
  }
  return rep;
}

RecurrenceResult recurrence_search(const PhaseState& s, double kappa,
                                   unsigned N, std::optional<double> period) {
  if (kappa <= 0.0) {
    throw ParameterOutOfRange("recurrence_search: requires kappa > 0");
  }
  if (N == 0) {
    throw ParameterOutOfRange("recurrence_search: N must be positive");
  }
  const double T = period ? *period : frequencies(s, kappa).T;

  const unsigned blocks = N * N;
  const std::size_t grid = 512;  // 256 sample points per period
  std::vector<double> times;
  times.reserve((blocks + 1) * grid);
  for (unsigned l = 0; l <= blocks; ++l) {
    for (std::size_t j = 0; j < grid; ++j) {
      times.push_back(2.0 * T * (static_cast<double>(l) +
                                 static_cast<double>(j) /
                                     static_cast<double>(grid)));
    }
  }
  const Trajectory traj = integrate(s, kappa, times);

  double base_max = 0.0;
  for (std::size_t j = 0; j < grid; ++j) {
    base_max = std::max(base_max, norm(traj.samples[j].state.A));
  }
  const double rel_bound = 8.0 * kPi / static_cast<double>(N);

  RecurrenceResult best;
  best.max_deviation = std::numeric_limits<double>::infinity();
  for (unsigned l = 1; l <= blocks; ++l) {
    double dev = 0.0;
    for (std::size_t j = 0; j < grid; ++j) {
      const Mat2& a0 = traj.samples[j].state.A;
      const Mat2& al = traj.samples[l * grid + j].state.A;
      dev = std::max(dev, norm(al - a0));
    }
    if (dev < best.max_deviation) {
      best.max_deviation = dev;
      best.ell = l;
    }
  }
  best.bound = rel_bound * base_max;
  best.bound_ratio = best.max_deviation / best.bound;
  best.within_bound = best.bound_ratio <= 1.0;
  return best;
}

}  // namespace sl2flow
