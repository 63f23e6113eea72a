#include "sl2flow/classify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "sl2flow/charts.hpp"
#include "sl2flow/errors.hpp"
#include "sl2flow/ode.hpp"

namespace sl2flow {

namespace {

double sq(double v) { return v * v; }

// Plain bisection; the callers always supply a sign-changing bracket.
double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(lo))) break;
  }
  return 0.5 * (lo + hi);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                            double fa, double b, double fb, double fm,
                            double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson_rec(f, a, fa, m, fm, flm, left, 0.5 * tol,
                              depth - 1) +
         adaptive_simpson_rec(f, m, fm, b, fb, frm, right, 0.5 * tol,
                              depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, fa, b, fb, fm, whole, tol, 40);
}

// Contiguous dense-output record of one reduced integration.
struct DenseSeq {
  std::vector<DenseStep<6>> steps;

  StateN<6> eval(double t) const {
    std::size_t lo = 0, hi = steps.size();
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (steps[mid].t0 <= t) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return steps[lo].eval(t);
  }
};

}  // namespace

const char* to_string(OrbitKind kind) {
  switch (kind) {
    case OrbitKind::Equilibrium: return "Equilibrium";
    case OrbitKind::RigidRotation: return "RigidRotation";
    case OrbitKind::Rigid: return "Rigid";
    case OrbitKind::PeriodicRadius: return "PeriodicRadius";
    case OrbitKind::Homoclinic: return "Homoclinic";
    case OrbitKind::UnboundedBothEnds: return "UnboundedBothEnds";
    case OrbitKind::UnboundedForward: return "UnboundedForward";
    case OrbitKind::UnboundedBackward: return "UnboundedBackward";
  }
  return "?";
}

const char* to_string(CurveTopology t) {
  switch (t) {
    case CurveTopology::Point: return "point";
    case CurveTopology::Closed: return "closed";
    case CurveTopology::Unbounded: return "unbounded";
    case CurveTopology::Homoclinic: return "homoclinic";
    case CurveTopology::EquilibriumLine: return "equilibrium-line";
  }
  return "?";
}

std::array<double, 2> rigid_conditions(double norm_a0_sq,
                                       const Invariants& inv) {
  const double s_minus = 0.5 * norm_a0_sq - 1.0;
  const double s_plus = 0.5 * norm_a0_sq + 1.0;
  const double r1 = inv.X1 -
                    0.5 * (sq(inv.X2) / s_minus + sq(inv.X3) / s_plus) -
                    0.5 * inv.kappa * norm_a0_sq;
  const double r2 =
      sq(inv.X2) / sq(s_minus) + sq(inv.X3) / sq(s_plus) - 2.0 * inv.kappa;
  return {r1, r2};
}

OrbitClass classify(const PhaseState& s, double kappa, double tol) {
  if (std::abs(det2(s.A) - 1.0) > tol) {
    throw NotOnManifold("classify: det A0 != 1");
  }
  const double scale0 = std::max(1.0, 0.5 * (norm_sq(s.A) + norm_sq(s.B)));
  if (std::abs(tangent_defect(s.A, s.B)) > tol * scale0) {
    throw NotOnManifold("classify: B0 is not tangent at A0");
  }

  const Invariants inv = invariants_of(s, kappa);
  const double band = tol * std::max(1.0, inv.X1);
  const double norm_a0 = norm_sq(s.A);
  const double dot_ab = inner(s.A, s.B);
  const bool a0_rotation = std::abs(norm_a0 - 2.0) <= band;
  const double rot_level = kappa + 0.25 * sq(inv.X3);  // X1 on rotation data

  OrbitClass out;
  out.pressureless = std::abs(inv.pressure_discriminant()) <= band;

  auto near_boundary = [&](double residual, const char* what) {
    if (std::abs(residual) > band && std::abs(residual) <= 1e3 * band) {
      out.warnings.push_back(std::string("near boundary: ") + what);
    }
  };

  const auto rigid_res =
      norm_a0 > 2.0 + band
          ? rigid_conditions(norm_a0, inv)
          : std::array<double, 2>{std::numeric_limits<double>::infinity(),
                                  std::numeric_limits<double>::infinity()};

  if (kappa > 0.0) {
    if (std::abs(inv.X1 - kappa) <= band) {
      out.kind = OrbitKind::Equilibrium;
    } else if (a0_rotation && std::abs(inv.X1 - rot_level) <= band) {
      out.kind = OrbitKind::RigidRotation;
    } else if (std::abs(rigid_res[0]) <= band &&
               std::abs(rigid_res[1]) <= band) {
      out.kind = OrbitKind::Rigid;
    } else if (std::abs(inv.X2) <= band &&
               std::abs(inv.X1 - rot_level) <= band &&
               sq(inv.X3) > 8.0 * kappa && !a0_rotation) {
      out.kind = OrbitKind::Homoclinic;
    } else {
      out.kind = OrbitKind::PeriodicRadius;
      near_boundary(inv.X1 - kappa, "equilibrium (X1 = kappa)");
      near_boundary(inv.X1 - rot_level, "rotation level (X1 = kappa + X3^2/4)");
      if (std::isfinite(rigid_res[0])) {
        near_boundary(rigid_res[0], "rigid condition 1");
        near_boundary(rigid_res[1], "rigid condition 2");
      }
    }
    if (out.kind == OrbitKind::Homoclinic) {
      near_boundary(sq(inv.X3) - 8.0 * kappa, "homoclinic bifurcation X3^2 = 8 kappa");
    }
  } else {
    if (inv.X1 <= band) {
      out.kind = OrbitKind::Equilibrium;
    } else if (a0_rotation && std::abs(inv.X1 - 0.25 * sq(inv.X3)) <= band) {
      out.kind = OrbitKind::RigidRotation;
    } else if (std::abs(inv.X2) <= band &&
               std::abs(inv.X1 - 0.25 * sq(inv.X3)) <= band) {
      out.kind = dot_ab < 0.0 ? OrbitKind::UnboundedBackward
                              : OrbitKind::UnboundedForward;
    } else {
      out.kind = OrbitKind::UnboundedBothEnds;
      near_boundary(inv.X1 - 0.25 * sq(inv.X3), "rotation level (X1 = X3^2/4)");
    }
  }

  out.passes_through_so2 =
      out.kind == OrbitKind::RigidRotation ||
      (out.kind == OrbitKind::Equilibrium && a0_rotation) ||
      (std::abs(inv.X2) <= band && inv.X1 > rot_level + band);
  return out;
}

std::vector<CriticalPoint> critical_points(double kappa, double X2,
                                           double X3) {
  std::vector<CriticalPoint> out;
  const bool x2_zero = std::abs(X2) <= 1e-14 * std::max(1.0, std::abs(X3));

  if (!x2_zero) {
    if (kappa <= 0.0) {
      throw NoCriticalPoint(
          "critical_points: level sets are unbounded for kappa = 0, X2 != 0");
    }
    // dV/dq1 of the radial potential; -infinity at 0+, +infinity at infinity.
    auto f = [&](double q) {
      const double two = 2.0 + q * q;
      return -sq(X2) / (q * q * q) - sq(X3) * q / sq(two) + 2.0 * kappa * q;
    };
    double hi = std::max(1.0, std::abs(X3) / std::sqrt(kappa));
    while (f(hi) <= 0.0) hi *= 2.0;
    double lo = std::min(1.0, hi);
    while (f(lo) >= 0.0) lo *= 0.5;
    out.push_back({bisect(f, lo, hi), CriticalPointType::Minimum});
    return out;
  }

  if (kappa > 0.0) {
    if (sq(X3) > 8.0 * kappa) {
      const double q1c = std::sqrt(std::abs(X3) / std::sqrt(2.0 * kappa) - 2.0);
      out.push_back({0.0, CriticalPointType::Saddle});
      out.push_back({q1c, CriticalPointType::Center});
      out.push_back({-q1c, CriticalPointType::Center});
    } else {
      out.push_back({0.0, CriticalPointType::Minimum});
    }
  } else if (X3 != 0.0) {
    out.push_back({0.0, CriticalPointType::Saddle});
  } else {
    // The xi1 = 0 axis is a line of equilibria; report its representative.
    out.push_back({0.0, CriticalPointType::Degenerate});
  }
  return out;
}

namespace {

// Integrates the reduced system recording dense output, and locates the
// first two maxima of |A(t)| (downcrossings of q1*xi1). Returns false if the
// time cap is hit first.
struct PeriodScan {
  double t_first = 0.0;
  double t_second = 0.0;
  DenseSeq seq;
  bool found = false;
};

PeriodScan scan_period(const ReducedState& init, double kappa, double t_cap) {
  const Regime regime = init.regime;
  auto rhs = [kappa, regime](double, const StateN<6>& y) {
    const ReducedState rs{{y[0], y[1], y[2]}, {y[3], y[4], y[5]}, regime};
    const ReducedState v =
        regime == Regime::X2NonZero ? rhs_hamsys2(rs, kappa)
                                    : rhs_hamsys3(rs, kappa);
    return StateN<6>{v.q[0], v.q[1], v.q[2], v.xi[0], v.xi[1], v.xi[2]};
  };
  auto sigma = [](const StateN<6>& y) { return y[0] * y[3]; };

  PeriodScan scan;
  StateN<6> y0 = {init.q[0],  init.q[1],  init.q[2],
                  init.xi[0], init.xi[1], init.xi[2]};
  double s_prev = sigma(y0);
  int hits = 0;

  OdeControl ctl;  // defaults match the dynamics module
  dopri5<6>(rhs, y0, 0.0, t_cap, ctl,
            [&](const DenseStep<6>& d, double, const StateN<6>& y) {
              scan.seq.steps.push_back(d);
              const double s_now = sigma(y);
              // Split the step once to catch double roots inside it.
              const double s_mid = sigma(d.eval(0.5 * (d.t0 + d.t1)));
              struct Piece {
                double a, b, sa, sb;
              };
              const Piece pieces[2] = {{d.t0, 0.5 * (d.t0 + d.t1), s_prev, s_mid},
                                       {0.5 * (d.t0 + d.t1), d.t1, s_mid, s_now}};
              for (const auto& piece : pieces) {
                if (piece.sa > 0.0 && piece.sb <= 0.0) {
                  double lo = piece.a, hi = piece.b;
                  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
                    const double mid = 0.5 * (lo + hi);
                    if (sigma(d.eval(mid)) > 0.0) {
                      lo = mid;
                    } else {
                      hi = mid;
                    }
                  }
                  const double root = 0.5 * (lo + hi);
                  ++hits;
                  if (hits == 1) scan.t_first = root;
                  if (hits == 2) {
                    scan.t_second = root;
                    scan.found = true;
                    return false;
                  }
                }
              }
              s_prev = s_now;
              return true;
            });
  return scan;
}

}  // namespace

FrequencyReport frequencies(const PhaseState& s, double kappa) {
  const OrbitClass oc = classify(s, kappa);
  const Invariants inv = invariants_of(s, kappa);
  const double norm_a0 = norm_sq(s.A);

  FrequencyReport rep;
  switch (oc.kind) {
    case OrbitKind::Equilibrium:
      rep.T = 1.0;  // |A| constant: any period is valid
      rep.omega1 = 0.0;
      rep.omega2 = 0.0;
      break;
    case OrbitKind::RigidRotation:
      rep.T = 1.0;
      rep.omega1 = 0.5 * inv.X3;
      rep.omega2 = 0.0;
      break;
    case OrbitKind::Rigid: {
      rep.T = 1.0;
      const double q1sq = 0.5 * norm_a0 - 1.0;
      rep.omega1 = inv.X3 / (2.0 + q1sq);
      rep.omega2 = inv.X2 / q1sq;
      break;
    }
    case OrbitKind::PeriodicRadius: {
      const ReducedState init = ambient_to_reduced(s);
      const PeriodScan scan = scan_period(init, kappa, 4000.0);
      if (!scan.found) {
        throw NotPeriodic("frequencies: no radius period detected");
      }
      rep.T = scan.t_second - scan.t_first;
      const double a = scan.t_first, b = scan.t_second;
      auto q1sq_at = [&](double t) { return sq(scan.seq.eval(t)[0]); };
      rep.omega1 = adaptive_simpson(
                       [&](double t) { return inv.X3 / (2.0 + q1sq_at(t)); },
                       a, b, 1e-9) /
                   rep.T;
      rep.omega2 = 0.0;
      if (init.regime == Regime::X2NonZero) {
        rep.omega2 = adaptive_simpson(
                         [&](double t) { return inv.X2 / q1sq_at(t); }, a, b,
                         1e-9) /
                     rep.T;
      }
      break;
    }
    default:
      throw NotPeriodic("frequencies: |A(t)| is not periodic for this orbit");
  }
  rep.hatA_period = oc.passes_through_so2 ? 2.0 * rep.T : rep.T;
  return rep;
}

namespace {

struct LevelProblem {
  double kappa, X2, X3, energy;
  bool with_x2_term;

  double potential(double q1) const {
    const double q2 = q1 * q1;
    double v = 0.5 * sq(X3) / (2.0 + q2) + kappa * (1.0 + q2);
    if (with_x2_term) v += 0.5 * sq(X2) / q2;
    return v;
  }
  double margin(double q1) const { return energy - potential(q1); }
  double xi1(double q1) const {
    const double q2 = q1 * q1;
    const double m = std::max(0.0, margin(q1));
    return std::sqrt(4.0 * (1.0 + q2) * m / (2.0 + q2));
  }
};

// Upper-then-lower sweep between two turning points; closed polyline.
LevelCurve closed_loop(const LevelProblem& lp, double a, double b,
                       std::size_t n, CurveTopology tag) {
  LevelCurve curve;
  curve.topology = tag;
  curve.points.reserve(2 * n + 1);
  const double pi = 3.14159265358979323846;
  for (std::size_t i = 0; i <= n; ++i) {
    const double s = 0.5 * (1.0 - std::cos(pi * static_cast<double>(i) /
                                           static_cast<double>(n)));
    const double q = a + (b - a) * s;
    curve.points.push_back({q, lp.xi1(q)});
  }
  for (std::size_t i = n; i-- > 0;) {
    const double s = 0.5 * (1.0 - std::cos(pi * static_cast<double>(i) /
                                           static_cast<double>(n)));
    const double q = a + (b - a) * s;
    curve.points.push_back({q, -lp.xi1(q)});
  }
  curve.points.push_back(curve.points.front());
  return curve;
}

// Branch from the turning point a out to the viewing window on one side,
// swept lower -> turning point -> upper.
LevelCurve open_branch(const LevelProblem& lp, double a, double view,
                       std::size_t n) {
  LevelCurve curve;
  curve.topology = CurveTopology::Unbounded;
  curve.points.reserve(2 * n + 1);
  for (std::size_t i = n; i-- > 0;) {
    const double s = static_cast<double>(i + 1) / static_cast<double>(n);
    const double q = a + (view - a) * s * s;
    curve.points.push_back({q, -lp.xi1(q) * (view >= a ? 1.0 : -1.0)});
  }
  curve.points.push_back({a, 0.0});
  for (std::size_t i = 0; i < n; ++i) {
    const double s = static_cast<double>(i + 1) / static_cast<double>(n);
    const double q = a + (view - a) * s * s;
    curve.points.push_back({q, lp.xi1(q) * (view >= a ? 1.0 : -1.0)});
  }
  return curve;
}

// Full sweep at fixed sign of xi1 when the energy clears the potential on
// the whole window [lo, hi].
LevelCurve full_sweep(const LevelProblem& lp, double lo, double hi, int sign,
                      std::size_t n) {
  LevelCurve curve;
  curve.topology = CurveTopology::Unbounded;
  curve.points.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double q =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
    curve.points.push_back({q, sign * lp.xi1(q)});
  }
  return curve;
}

LevelCurve single_point(double q1) {
  LevelCurve curve;
  curve.topology = CurveTopology::Point;
  curve.points.push_back({q1, 0.0});
  return curve;
}

double turning_point(const LevelProblem& lp, double lo, double hi) {
  return bisect([&](double q) { return lp.margin(q); }, lo, hi);
}

}  // namespace

LevelSet level_curve(ReducedHamiltonian which, double kappa, double X2,
                     double X3, double energy, const LevelCurveOptions& opts) {
  LevelSet out;
  out.energy = energy;
  const std::size_t n = std::max<std::size_t>(8, opts.samples_per_branch);
  const double view = opts.q1_view;
  const double band = 1e-9 * std::max(1.0, std::abs(energy));

  if (which == ReducedHamiltonian::Htilde) {
    if (std::abs(X2) <= 0.0) {
      throw ParameterOutOfRange("level_curve: Htilde requires X2 != 0");
    }
    LevelProblem lp{kappa, X2, X3, energy, true};
    if (kappa > 0.0) {
      const auto cps = critical_points(kappa, X2, X3);
      const double qmin = cps.front().q1;
      const double emin = lp.potential(qmin);
      if (energy < emin - band) {
        throw EmptyLevelSet("level_curve: energy below the minimum of Htilde");
      }
      if (energy <= emin + band) {
        out.curves.push_back(single_point(qmin));
        return out;
      }
      double lo = qmin;
      while (lp.margin(lo) > 0.0) lo *= 0.5;
      double hi = qmin;
      while (lp.margin(hi) > 0.0) hi *= 2.0;
      const double a = turning_point(lp, lo, qmin);
      const double b = turning_point(lp, qmin, hi);
      out.curves.push_back(closed_loop(lp, a, b, n, CurveTopology::Closed));
      return out;
    }
    // kappa = 0: the potential decays monotonically; one unbounded branch.
    if (energy <= band) {
      throw EmptyLevelSet("level_curve: energy below the infimum of Htilde");
    }
    double lo = 1.0;
    while (lp.margin(lo) > 0.0) lo *= 0.5;
    double hi = 1.0;
    while (lp.margin(hi) < 0.0) hi *= 2.0;
    const double a = turning_point(lp, lo, hi);
    out.curves.push_back(open_branch(lp, a, std::max(view, 2.0 * a), n));
    return out;
  }

  // H0 on the whole q1 line.
  LevelProblem lp{kappa, 0.0, X3, energy, false};
  const double e_saddle = kappa + 0.25 * sq(X3);  // value at (0, 0)

  if (kappa > 0.0) {
    const bool two_wells = sq(X3) > 8.0 * kappa;
    const double q1c =
        two_wells ? std::sqrt(std::abs(X3) / std::sqrt(2.0 * kappa) - 2.0)
                  : 0.0;
    const double emin = lp.potential(q1c);
    if (energy < emin - band) {
      throw EmptyLevelSet("level_curve: energy below the minimum of H0");
    }
    if (energy <= emin + band) {
      out.curves.push_back(single_point(q1c));
      if (two_wells) out.curves.push_back(single_point(-q1c));
      return out;
    }
    double hi = std::max(1.0, q1c);
    while (lp.margin(hi) > 0.0) hi *= 2.0;
    const double b = turning_point(lp, q1c, hi);
    if (!two_wells || energy > e_saddle + band) {
      // One closed orbit around everything.
      const double bb = two_wells ? b : turning_point(lp, 0.0, hi);
      out.curves.push_back(closed_loop(lp, -bb, bb, n, CurveTopology::Closed));
      return out;
    }
    if (energy >= e_saddle - band) {
      // Saddle level: equilibrium plus two homoclinic loops.
      out.curves.push_back(single_point(0.0));
      out.curves.push_back(closed_loop(lp, 0.0, b, n, CurveTopology::Homoclinic));
      out.curves.push_back(closed_loop(lp, -b, 0.0, n, CurveTopology::Homoclinic));
      return out;
    }
    // Below the saddle: a pair of closed orbits inside the wells.
    const double a = turning_point(lp, 1e-12, q1c);
    out.curves.push_back(closed_loop(lp, a, b, n, CurveTopology::Closed));
    out.curves.push_back(closed_loop(lp, -b, -a, n, CurveTopology::Closed));
    return out;
  }

  // kappa = 0.
  if (X3 != 0.0) {
    if (energy <= band) {
      throw EmptyLevelSet("level_curve: energy below the infimum of H0");
    }
    if (energy > e_saddle + band) {
      out.curves.push_back(full_sweep(lp, -view, view, +1, 2 * n));
      out.curves.push_back(full_sweep(lp, -view, view, -1, 2 * n));
      return out;
    }
    if (energy >= e_saddle - band) {
      // Stable/unstable manifolds: equilibrium plus four semi-bounded orbits.
      out.curves.push_back(single_point(0.0));
      for (int qs : {+1, -1}) {
        for (int xs : {+1, -1}) {
          LevelCurve curve;
          curve.topology = CurveTopology::Unbounded;
          curve.points.reserve(n + 1);
          for (std::size_t i = 0; i <= n; ++i) {
            const double s =
                static_cast<double>(i) / static_cast<double>(n);
            const double q = qs * view * s * s;
            curve.points.push_back({q, xs * lp.xi1(q)});
          }
          out.curves.push_back(std::move(curve));
        }
      }
      return out;
    }
    double hi = 1.0;
    while (lp.margin(hi) < 0.0) hi *= 2.0;
    const double a = turning_point(lp, 0.0, hi);
    out.curves.push_back(open_branch(lp, a, std::max(view, 2.0 * a), n));
    out.curves.push_back(open_branch(lp, -a, -std::max(view, 2.0 * a), n));
    return out;
  }

  // kappa = 0, X3 = 0: free radial motion.
  if (energy < -band) {
    throw EmptyLevelSet("level_curve: negative energy for H0 with X3 = 0");
  }
  if (energy <= band) {
    LevelCurve line;
    line.topology = CurveTopology::EquilibriumLine;
    for (std::size_t i = 0; i <= 2 * n; ++i) {
      const double q = -view + 2.0 * view * static_cast<double>(i) /
                                  static_cast<double>(2 * n);
      line.points.push_back({q, 0.0});
    }
    out.curves.push_back(std::move(line));
    return out;
  }
  out.curves.push_back(full_sweep(lp, -view, view, +1, 2 * n));
  out.curves.push_back(full_sweep(lp, -view, view, -1, 2 * n));
  return out;
}

Vec3 TangentReport::xi_hat(const Mat2& B) const {
  return {inner(tau[0], B), inner(tau[1], B), inner(tau[2], B)};
}

double TangentReport::pressureless_residual(const Mat2& B) const {
  const Vec3 xh = xi_hat(B);
  const auto& q = pressureless_quadric;
  return q[0] * sq(xh[0]) + q[1] * sq(xh[1]) + q[2] * sq(xh[2]) + q[3];
}

std::array<double, 2> TangentReport::rigid_residuals(const Mat2& B) const {
  const Vec3 xh = xi_hat(B);
  if (!has_rigid_set) {
    // On the rotation subgroup rigid rotations are exactly the tau3 span.
    return {xh[0], xh[1]};
  }
  return {xh[0],
          rigid_coeffs[0] * sq(xh[1]) + rigid_coeffs[1] * sq(xh[2]) -
              2.0 * kappa};
}

std::array<double, 2> TangentReport::manifold_residuals(const Mat2& B) const {
  const Vec3 xh = xi_hat(B);
  return {0.5 * sq(xh[0]) + kappa * sq(q1) - 0.25 * sq(q1) * sq(xh[2]),
          xh[1]};
}

TangentReport tangent_launcher(const Mat2& A, double kappa, double tol) {
  if (!is_sl2(A, tol)) {
    throw NotOnManifold("tangent_launcher: det A != 1");
  }
  TangentReport rep;
  rep.kappa = kappa;
  const double q1sq = 0.5 * norm_sq(A) - 1.0;
  rep.at_so2 = q1sq <= tol;
  rep.tau = orthonormal_tangent_frame(A, tol);
  if (rep.at_so2) {
    rep.q1 = 0.0;
    rep.pressureless_quadric = {1.0, 1.0, -1.0, 2.0 * kappa};
    rep.has_rigid_set = false;
    rep.has_invariant_manifold_set = false;
  } else {
    rep.q1 = std::sqrt(q1sq);
    rep.pressureless_quadric = {1.0 / (1.0 + q1sq), 1.0, -1.0, 2.0 * kappa};
    rep.has_rigid_set = kappa > 0.0;
    rep.rigid_coeffs = {1.0 / q1sq, 1.0 / (2.0 + q1sq)};
    rep.has_invariant_manifold_set = true;
  }
  return rep;
}

}  // namespace sl2flow
