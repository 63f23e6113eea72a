#include "sl2flow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

#include "sl2flow/errors.hpp"
#include "sl2flow/ode.hpp"

namespace sl2flow {

Invariants invariants_of(const PhaseState& s, double kappa) {
  const Mat2 za = kRot * s.A;
  const Mat2 az = s.A * kRot;
  Invariants inv;
  inv.kappa = kappa;
  inv.X1 = 0.5 * norm_sq(s.B) + 0.5 * kappa * norm_sq(s.A);
  inv.X2 = 0.5 * inner(za - az, s.B);
  inv.X3 = 0.5 * inner(za + az, s.B);
  return inv;
}

double lagrange_multiplier(const PhaseState& s, double kappa) {
  return 2.0 * (kappa - det2(s.B)) / norm_sq(s.A);
}

double multiplier_from_invariants(const Invariants& inv, double norm_a_sq) {
  return (4.0 * inv.X1 + 2.0 * inv.X2 * inv.X2 - 2.0 * inv.X3 * inv.X3) /
         (norm_a_sq * norm_a_sq);
}

PhaseState rhs_ambient(const PhaseState& s, double kappa) {
  const double lam = lagrange_multiplier(s, kappa);
  return {s.B, cofactor(s.A) * lam - s.A * kappa};
}

ChartPoint rhs_hamsys(const ChartPoint& cp, double kappa) {
  const double x1 = cp.x[0], x2 = cp.x[1];
  const double p1 = cp.p[0], p2 = cp.p[1], p3 = cp.p[2];
  const double r2 = rho_sq(cp.x);
  const double f = r2 + x1 * x1 + x2 * x2;  // |phi(x)|^2
  const double s = x1 * p2 - x2 * p1;       // X2 in these coordinates
  const double pbar_sq = p1 * p1 + p2 * p2;

  ChartPoint v;
  v.x[0] = (r2 * p1 - s * x2) / f;
  v.x[1] = (r2 * p2 + s * x1) / f;
  v.x[2] = p3 / r2;
  const double radial =
      2.0 * (pbar_sq + s * s) / (f * f) + p3 * p3 / (r2 * r2) - 2.0 * kappa;
  v.p[0] = radial * x1 - (s / f) * p2;
  v.p[1] = radial * x2 + (s / f) * p1;
  v.p[2] = 0.0;
  return v;
}

ReducedState rhs_hamsys2(const ReducedState& rs, double kappa) {
  const double q1 = rs.q[0];
  if (q1 <= 0.0) {
    throw SingularChart("rhs_hamsys2: q1 must be positive");
  }
  const double q1sq = q1 * q1;
  const double xi1 = rs.xi[0], xi2 = rs.xi[1], xi3 = rs.xi[2];
  const double one = 1.0 + q1sq;
  const double two = 2.0 + q1sq;

  ReducedState v;
  v.regime = rs.regime;
  v.q[0] = two * xi1 / (2.0 * one);
  v.q[1] = xi2 / q1sq;
  v.q[2] = xi3 / two;
  v.xi[0] = (xi1 * xi1 / (2.0 * one * one) + xi2 * xi2 / (q1sq * q1sq) +
             xi3 * xi3 / (two * two) - 2.0 * kappa) *
            q1;
  v.xi[1] = 0.0;
  v.xi[2] = 0.0;
  return v;
}

ReducedState rhs_hamsys3(const ReducedState& rs, double kappa) {
  const double q1 = rs.q[0];
  const double q1sq = q1 * q1;
  const double xi1 = rs.xi[0], xi3 = rs.xi[2];
  const double one = 1.0 + q1sq;
  const double two = 2.0 + q1sq;

  ReducedState v;
  v.regime = rs.regime;
  v.q[0] = two * xi1 / (2.0 * one);
  v.q[1] = 0.0;
  v.q[2] = xi3 / two;
  v.xi[0] =
      (xi1 * xi1 / (2.0 * one * one) + xi3 * xi3 / (two * two) - 2.0 * kappa) *
      q1;
  v.xi[1] = 0.0;
  v.xi[2] = 0.0;
  return v;
}

double hamiltonian_chart(const ChartPoint& cp, double kappa) {
  const Vec3 y = gamma(cp.x, cp.p);
  const double kinetic = 0.5 * (y[0] * cp.p[0] + y[1] * cp.p[1] + y[2] * cp.p[2]);
  const double phin2 = 2.0 * (1.0 + cp.x[0] * cp.x[0] + cp.x[1] * cp.x[1]);
  return kinetic + 0.5 * kappa * phin2;
}

double h_tilde(double q1, double xi1, double X2, double X3, double kappa) {
  const double q1sq = q1 * q1;
  return 0.5 * ((2.0 + q1sq) * xi1 * xi1 / (2.0 * (1.0 + q1sq)) +
                X2 * X2 / q1sq + X3 * X3 / (2.0 + q1sq)) +
         kappa * (1.0 + q1sq);
}

double h_zero(double q1, double xi1, double X3, double kappa) {
  const double q1sq = q1 * q1;
  return 0.5 * ((2.0 + q1sq) * xi1 * xi1 / (2.0 * (1.0 + q1sq)) +
                X3 * X3 / (2.0 + q1sq)) +
         kappa * (1.0 + q1sq);
}

double hamiltonian_reduced(const ReducedState& rs, double kappa) {
  if (rs.regime == Regime::X2NonZero) {
    return h_tilde(rs.q[0], rs.xi[0], rs.xi[1], rs.xi[2], kappa);
  }
  return h_zero(rs.q[0], rs.xi[0], rs.xi[2], kappa);
}

double q1_lower_bound(const Invariants& inv) {
  if (inv.X1 <= 0.0) return 0.0;
  return std::abs(inv.X2) / std::sqrt(2.0 * inv.X1);
}

std::vector<double> linspace(double t0, double t1, std::size_t n) {
  std::vector<double> ts;
  ts.reserve(n);
  if (n == 0) return ts;
  if (n == 1) {
    ts.push_back(t0);
    return ts;
  }
  for (std::size_t i = 0; i < n; ++i) {
    ts.push_back(t0 + (t1 - t0) * static_cast<double>(i) /
                          static_cast<double>(n - 1));
  }
  return ts;
}

namespace {

constexpr double kPressurelessTol = 1e-10;

PhaseState unpack8(const StateN<8>& y) {
  return {{y[0], y[1], y[2], y[3]}, {y[4], y[5], y[6], y[7]}};
}

StateN<8> pack(const PhaseState& s) {
  return {s.A.a11, s.A.a12, s.A.a21, s.A.a22,
          s.B.a11, s.B.a12, s.B.a21, s.B.a22};
}

ChartPoint unpack_chart(const StateN<6>& y) {
  return {{y[0], y[1], y[2]}, {y[3], y[4], y[5]}};
}

ReducedState unpack_reduced(const StateN<6>& y, Regime regime) {
  return {{y[0], y[1], y[2]}, {y[3], y[4], y[5]}, regime};
}

TrajectorySample make_sample(double t, const PhaseState& s, double kappa,
                             const Invariants& inv0) {
  TrajectorySample out;
  out.t = t;
  out.state = s;
  out.lambda = lagrange_multiplier(s, kappa);
  const Invariants inv = invariants_of(s, kappa);
  out.invariant_drift = {std::abs(inv.X1 - inv0.X1), std::abs(inv.X2 - inv0.X2),
                         std::abs(inv.X3 - inv0.X3)};
  out.det_defect = std::abs(det2(s.A) - 1.0);
  return out;
}

// Evaluates the linear vanishing-pressure solution at the requested times.
Trajectory closed_form_trajectory(const PhaseState& init, double kappa,
                                  const std::vector<double>& times,
                                  Formulation formulation,
                                  const Invariants& inv0) {
  Trajectory traj;
  traj.formulation = formulation;
  traj.kappa = kappa;
  traj.initial = inv0;
  traj.closed_form = true;
  traj.samples.reserve(times.size());
  const double w = std::sqrt(kappa);
  for (double t : times) {
    PhaseState s;
    if (kappa == 0.0) {
      s = {init.A + init.B * t, init.B};
    } else {
      const double c = std::cos(w * t);
      const double sn = std::sin(w * t);
      s = {init.A * c + init.B * (sn / w), init.A * (-w * sn) + init.B * c};
    }
    traj.samples.push_back(make_sample(t, s, kappa, inv0));
  }
  return traj;
}

struct LegOutput {
  std::vector<TrajectorySample> samples;
  std::vector<ReducedState> reduced;
  std::vector<ChartPoint> chart;
};

// One direction of a run: from the state at t = 0 out to leg_times.back().
// leg_times are ordered in integration direction.
template <std::size_t N, typename Rhs, typename ToAmbient, typename PostStep,
          typename Native>
LegOutput run_leg(Rhs rhs, const StateN<N>& y0,
                  const std::vector<double>& leg_times, double kappa,
                  const Invariants& inv0, const IntegrateOptions& opts,
                  ToAmbient to_ambient, PostStep post_step, Native native,
                  bool renormalize_ambient) {
  LegOutput out;
  if (leg_times.empty()) return out;

  auto emit = [&](double t, const StateN<N>& y) {
    out.samples.push_back(make_sample(t, to_ambient(y), kappa, inv0));
    native(y, out);
  };

  std::size_t idx = 0;
  while (idx < leg_times.size() && leg_times[idx] == 0.0) {
    emit(0.0, y0);
    ++idx;
  }
  if (idx == leg_times.size()) return out;

  OdeControl ctl;
  ctl.rtol = opts.rtol;
  ctl.atol = opts.atol;
  ctl.h_max = opts.h_max;
  ctl.max_steps = opts.max_steps;

  const double t_end = leg_times.back();
  const double dir = (t_end > 0.0) ? 1.0 : -1.0;

  auto mutate = [&](double, StateN<N>& y) {
    if constexpr (N == 8) {
      if (renormalize_ambient) {
        const double d = y[0] * y[3] - y[1] * y[2];
        const double s = 1.0 / std::sqrt(d);
        y[0] *= s;
        y[1] *= s;
        y[2] *= s;
        y[3] *= s;
        return true;
      }
    }
    (void)renormalize_ambient;
    return false;
  };

  dopri5<N>(
      rhs, y0, 0.0, t_end, ctl,
      [&](const DenseStep<N>& d, double t, const StateN<N>& y) {
        post_step(t, y);
        while (idx < leg_times.size() &&
               (leg_times[idx] - d.t1) * dir <= 0.0) {
          emit(leg_times[idx], d.eval(leg_times[idx]));
          ++idx;
        }
        return idx < leg_times.size();
      },
      mutate);
  return out;
}

void check_drift(const PhaseState& s, double kappa, const Invariants& inv0,
                 double max_drift) {
  const Invariants inv = invariants_of(s, kappa);
  const double drift = std::max({std::abs(inv.X1 - inv0.X1),
                                 std::abs(inv.X2 - inv0.X2),
                                 std::abs(inv.X3 - inv0.X3),
                                 std::abs(det2(s.A) - 1.0)});
  if (drift > max_drift) {
    throw ToleranceExceeded("integrate: invariant drift exceeded budget");
  }
}

template <typename Run>
Trajectory stitched(const std::vector<double>& times, Run run) {
  if (!std::is_sorted(times.begin(), times.end())) {
    throw std::invalid_argument("integrate: times must be ascending");
  }
  std::vector<double> backward, forward;
  for (double t : times) (t < 0.0 ? backward : forward).push_back(t);
  std::reverse(backward.begin(), backward.end());

  LegOutput back = run(backward);
  LegOutput fore = run(forward);

  Trajectory traj;
  traj.samples.reserve(times.size());
  std::reverse(back.samples.begin(), back.samples.end());
  std::reverse(back.reduced.begin(), back.reduced.end());
  std::reverse(back.chart.begin(), back.chart.end());
  auto append = [](auto& dst, auto& src) {
    dst.insert(dst.end(), src.begin(), src.end());
  };
  append(traj.samples, back.samples);
  append(traj.samples, fore.samples);
  append(traj.reduced, back.reduced);
  append(traj.reduced, fore.reduced);
  append(traj.chart, back.chart);
  append(traj.chart, fore.chart);
  return traj;
}

bool pressureless(const Invariants& inv) {
  return std::abs(inv.pressure_discriminant()) <=
         kPressurelessTol * std::max(1.0, inv.X1);
}

}  // namespace

Trajectory integrate(const PhaseState& init, double kappa,
                     const std::vector<double>& times,
                     const IntegrateOptions& opts) {
  const Invariants inv0 = invariants_of(init, kappa);
  if (opts.allow_closed_form && pressureless(inv0)) {
    auto sorted = times;
    std::sort(sorted.begin(), sorted.end());
    return closed_form_trajectory(init, kappa, sorted, Formulation::Ambient,
                                  inv0);
  }

  auto rhs = [kappa](double, const StateN<8>& y) {
    const PhaseState v = rhs_ambient(unpack8(y), kappa);
    return pack(v);
  };
  Trajectory traj = stitched(times, [&](const std::vector<double>& leg) {
    return run_leg<8>(
        rhs, pack(init), leg, kappa, inv0, opts,
        [](const StateN<8>& y) { return unpack8(y); },
        [&](double, const StateN<8>& y) {
          check_drift(unpack8(y), kappa, inv0, opts.max_drift);
        },
        [](const StateN<8>&, LegOutput&) {}, opts.renormalize);
  });
  traj.formulation = Formulation::Ambient;
  traj.kappa = kappa;
  traj.initial = inv0;
  return traj;
}

Trajectory integrate_chart(const ChartPoint& init, double kappa,
                           const std::vector<double>& times,
                           const IntegrateOptions& opts) {
  const PhaseState amb0 = ambient_from_chart(init);
  const Invariants inv0 = invariants_of(amb0, kappa);
  if (opts.allow_closed_form && pressureless(inv0)) {
    auto sorted = times;
    std::sort(sorted.begin(), sorted.end());
    return closed_form_trajectory(amb0, kappa, sorted, Formulation::Hamsys,
                                  inv0);
  }

  auto rhs = [kappa](double, const StateN<6>& y) {
    const ChartPoint v = rhs_hamsys(unpack_chart(y), kappa);
    return StateN<6>{v.x[0], v.x[1], v.x[2], v.p[0], v.p[1], v.p[2]};
  };
  const StateN<6> y0 = {init.x[0], init.x[1], init.x[2],
                        init.p[0], init.p[1], init.p[2]};
  Trajectory traj = stitched(times, [&](const std::vector<double>& leg) {
    return run_leg<6>(
        rhs, y0, leg, kappa, inv0, opts,
        [](const StateN<6>& y) { return ambient_from_chart(unpack_chart(y)); },
        [&](double, const StateN<6>& y) {
          check_drift(ambient_from_chart(unpack_chart(y)), kappa, inv0,
                      opts.max_drift);
        },
        [](const StateN<6>& y, LegOutput& out) {
          out.chart.push_back(unpack_chart(y));
        },
        false);
  });
  traj.formulation = Formulation::Hamsys;
  traj.kappa = kappa;
  traj.initial = inv0;
  return traj;
}

Trajectory integrate_reduced(const ReducedState& init, double kappa,
                             const std::vector<double>& times,
                             const IntegrateOptions& opts) {
  const Regime regime = init.regime;
  const PhaseState amb0 = reduced_to_ambient(init);
  const Invariants inv0 = invariants_of(amb0, kappa);
  const Formulation formulation = (regime == Regime::X2NonZero)
                                      ? Formulation::Hamsys2
                                      : Formulation::Hamsys3;
  if (opts.allow_closed_form && pressureless(inv0)) {
    auto sorted = times;
    std::sort(sorted.begin(), sorted.end());
    return closed_form_trajectory(amb0, kappa, sorted, formulation, inv0);
  }

  const double q_floor =
      (regime == Regime::X2NonZero) ? 0.5 * q1_lower_bound(inv0) : -1.0;

  auto rhs = [kappa, regime](double, const StateN<6>& y) {
    const ReducedState v = (regime == Regime::X2NonZero)
                               ? rhs_hamsys2(unpack_reduced(y, regime), kappa)
                               : rhs_hamsys3(unpack_reduced(y, regime), kappa);
    return StateN<6>{v.q[0], v.q[1], v.q[2], v.xi[0], v.xi[1], v.xi[2]};
  };
  const StateN<6> y0 = {init.q[0],  init.q[1],  init.q[2],
                        init.xi[0], init.xi[1], init.xi[2]};
  Trajectory traj = stitched(times, [&](const std::vector<double>& leg) {
    return run_leg<6>(
        rhs, y0, leg, kappa, inv0, opts,
        [&](const StateN<6>& y) {
          return reduced_to_ambient(unpack_reduced(y, regime));
        },
        [&](double, const StateN<6>& y) {
          if (regime == Regime::X2NonZero && y[0] <= q_floor) {
            throw SingularChart(
                "integrate: q1 fell below the invariant lower bound");
          }
          check_drift(reduced_to_ambient(unpack_reduced(y, regime)), kappa,
                      inv0, opts.max_drift);
        },
        [&](const StateN<6>& y, LegOutput& out) {
          out.reduced.push_back(unpack_reduced(y, regime));
        },
        false);
  });
  traj.formulation = formulation;
  traj.kappa = kappa;
  traj.initial = inv0;
  return traj;
}

std::vector<Trajectory> integrate_batch(const std::vector<PhaseState>& inits,
                                        double kappa,
                                        const std::vector<double>& times,
                                        const IntegrateOptions& opts,
                                        int parallelism) {
  std::size_t par = parallelism > 0
                        ? static_cast<std::size_t>(parallelism)
                        : std::max(1u, std::thread::hardware_concurrency());
  std::vector<Trajectory> out(inits.size());
  std::size_t next = 0;
  while (next < inits.size()) {
    const std::size_t first = next;
    const std::size_t last = std::min(inits.size(), first + par);
    std::vector<std::future<Trajectory>> wave;
    for (std::size_t i = first; i < last; ++i) {
      wave.push_back(std::async(std::launch::async, [&, i] {
        return integrate(inits[i], kappa, times, opts);
      }));
    }
    for (std::size_t i = first; i < last; ++i) {
      out[i] = wave[i - first].get();
    }
    next = last;
  }
  return out;
}

}  // namespace sl2flow
