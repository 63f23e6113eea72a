#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

#include "sl2flow/errors.hpp"

namespace sl2flow {

template <std::size_t N>
using StateN = std::array<double, N>;

// Quartic interpolant over one accepted step [t0, t1] (t1 < t0 for backward
// integration). Coefficients follow the classic continuous extension of the
// Dormand-Prince 5(4) pair.
template <std::size_t N>
struct DenseStep {
  double t0 = 0.0;
  double t1 = 0.0;
  std::array<StateN<N>, 5> r{};

  StateN<N> eval(double t) const {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    StateN<N> y{};
    for (std::size_t i = 0; i < N; ++i) {
      y[i] = r[0][i] + s * (r[1][i] + s1 * (r[2][i] + s * (r[3][i] + s1 * r[4][i])));
    }
    return y;
  }
};

struct OdeControl {
  double rtol = 1e-12;
  double atol = 1e-13;
  double h_init = 0.0;  // 0 picks a conservative starting step
  double h_max = 1.0;
  std::size_t max_steps = 100000000;
};

// Adaptive embedded Runge-Kutta 5(4), Dormand-Prince coefficients, with
// fourth-order dense output. Integrates y' = f(t, y) from t0 to t1 (either
// direction). After each accepted step calls on_step(dense, t, y); a false
// return stops the run. An optional mutate(t, y) hook may adjust the accepted
// state (returning true invalidates the FSAL derivative).
template <std::size_t N, typename Rhs, typename OnStep,
          typename Mutate = bool (*)(double, StateN<N>&)>
void dopri5(
    Rhs&& f, StateN<N> y, double t0, double t1, const OdeControl& ctl,
    OnStep&& on_step,
    Mutate&& mutate = [](double, StateN<N>&) { return false; }) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113,
                          a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                          a76 = 11.0 / 84;
  // 5th-order minus 4th-order weights.
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  // Dense-output weights.
  static constexpr double d1 = -12715105075.0 / 11282082432.0;
  static constexpr double d3 = 87487479700.0 / 32700410799.0;
  static constexpr double d4 = -10690763975.0 / 1880347072.0;
  static constexpr double d5 = 701980252875.0 / 199316789632.0;
  static constexpr double d6 = -1453857185.0 / 822651844.0;
  static constexpr double d7 = 69997945.0 / 29380423.0;

  if (t1 == t0) return;
  const double dir = (t1 > t0) ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);

  double t = t0;
  StateN<N> k1 = f(t, y);

  double h = ctl.h_init;
  if (h == 0.0) {
    // Crude first guess from the derivative magnitude; the controller
    // corrects it within a few steps.
    double ynorm = 0.0, fnorm = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      ynorm = std::max(ynorm, std::abs(y[i]));
      fnorm = std::max(fnorm, std::abs(k1[i]));
    }
    h = 0.01 * std::max(1.0, ynorm) / std::max(1.0, fnorm);
  }
  h = std::min({h, ctl.h_max, span});
  h *= dir;

  StateN<N> k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, yt{}, ynew{};

  for (std::size_t step = 0; step < ctl.max_steps; ++step) {
    if ((t - t1) * dir >= 0.0) return;
    if ((t + h - t1) * dir > 0.0) h = t1 - t;
    if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t))) {
      throw ToleranceExceeded("dopri5: step size underflow");
    }

    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * a21 * k1[i];
    k2 = f(t + c2 * h, yt);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = f(t + c3 * h, yt);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = f(t + c4 * h, yt);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = f(t + c5 * h, yt);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                          a64 * k4[i] + a65 * k5[i]);
    k6 = f(t + h, yt);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] +
                            a75 * k5[i] + a76 * k6[i]);
    k7 = f(t + h, ynew);  // FSAL

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                             e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc =
          ctl.atol + ctl.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / static_cast<double>(N));

    if (err <= 1.0) {
      DenseStep<N> dense;
      dense.t0 = t;
      dense.t1 = t + h;
      for (std::size_t i = 0; i < N; ++i) {
        const double ydiff = ynew[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        dense.r[0][i] = y[i];
        dense.r[1][i] = ydiff;
        dense.r[2][i] = bspl;
        dense.r[3][i] = ydiff - h * k7[i] - bspl;
        dense.r[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] +
                             d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }

      t += h;
      y = ynew;
      k1 = k7;
      if (mutate(t, y)) k1 = f(t, y);
      if (!on_step(dense, t, y)) return;
    }

    double factor = 0.9 * std::pow(std::max(err, 1e-16), -0.2);
    factor = std::min(5.0, std::max(0.2, factor));
    h *= factor;
    if (std::abs(h) > ctl.h_max) h = dir * ctl.h_max;
  }
  throw ToleranceExceeded("dopri5: step budget exhausted");
}

}  // namespace sl2flow
