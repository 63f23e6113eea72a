#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sl2flow/charts.hpp"
#include "sl2flow/dynamics.hpp"
#include "sl2flow/errors.hpp"
#include "sl2flow/random.hpp"
#include "test_support.hpp"

using namespace sl2flow;
using test::angle_diff;
using test::max_abs_diff;
using test::rel_err;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.4142135623730951;

// Central finite-difference Jacobian of phi; independent of the closed form.
std::array<Mat2, 3> fd_jacobian(const Vec3& x, double h = 1e-5) {
  std::array<Mat2, 3> cols{};
  for (int i = 0; i < 3; ++i) {
    Vec3 xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    cols[i] = (phi(xp) - phi(xm)) / (2.0 * h);
  }
  return cols;
}

}  // namespace

TEST_CASE("phi at distinguished points") {
  CHECK(max_abs_diff(phi({0, 0, 0}), kId) < 1e-15);
  CHECK(max_abs_diff(phi({0, 0, 1.1}), rotation(1.1)) < 1e-15);
  const double s3 = std::sqrt(3.0);
  const Mat2 want{(s3 + 1.0) / kSqrt2, 0.0, 0.0, (s3 - 1.0) / kSqrt2};
  CHECK(max_abs_diff(phi({1, 0, 0}), want) < 1e-15);
}

TEST_CASE("phi lands on det = 1 and carries the stated norm") {
  Sampler rng(101);
  for (int i = 0; i < 500; ++i) {
    const Vec3 x = rng.vec3(10.0);
    const Mat2 a = phi(x);
    CHECK(std::abs(det2(a) - 1.0) < 1e-12);
    CHECK(rel_err(norm_sq(a), 2.0 * (1.0 + x[0] * x[0] + x[1] * x[1])) <
          1e-14);
  }
}

TEST_CASE("phi_inverse") {
  const Vec3 x0 = phi_inverse(kId);
  CHECK(std::abs(x0[0]) < 1e-15);
  CHECK(std::abs(x0[1]) < 1e-15);
  CHECK(std::abs(x0[2]) < 1e-15);

  const Vec3 xr = phi_inverse(rotation(kPi / 3.0));
  CHECK(std::abs(xr[2] - kPi / 3.0) < 1e-15);

  // Unit shear: components evaluated from the defining inner products.
  const Mat2 shear{1, 0, 2, 1};
  const Vec3 xs = phi_inverse(shear);
  CHECK(std::abs(xs[0]) < 1e-15);
  CHECK(std::abs(xs[1] - kSqrt2) < 1e-15);
  CHECK(std::abs(xs[2] - kPi / 4.0) < 1e-15);
  CHECK(max_abs_diff(phi(xs), shear) < 1e-15);

  CHECK_THROWS_AS(phi_inverse(Mat2{2, 0, 0, 1}), NotOnManifold);

  // Round-trip over random chart points (angles modulo 2 pi).
  Sampler rng(103);
  for (int i = 0; i < 200; ++i) {
    const Vec3 x = rng.vec3(3.0);
    const Vec3 back = phi_inverse(phi(x));
    CHECK(std::abs(back[0] - x[0]) < 1e-12);
    CHECK(std::abs(back[1] - x[1]) < 1e-12);
    CHECK(angle_diff(back[2], x[2]) < 1e-12);
  }
}

TEST_CASE("tangent-bundle chart") {
  const PhaseState s1 = big_phi({0, 0, 0}, {0, 0, 1});
  CHECK(max_abs_diff(s1.A, kId) < 1e-15);
  CHECK(max_abs_diff(s1.B, kRot) < 1e-15);

  const PhaseState s2 = big_phi({0, 0, 0}, {1, 0, 0});
  CHECK(max_abs_diff(s2.B, kDiag / kSqrt2) < 1e-15);

  Sampler rng(107);
  for (int i = 0; i < 200; ++i) {
    const PhaseState s = big_phi(rng.vec3(3.0), rng.vec3(3.0));
    CHECK(std::abs(tangent_defect(s.A, s.B)) < 1e-10);
  }
}

TEST_CASE("closed-form Jacobian matches finite differences") {
  Sampler rng(109);
  for (int i = 0; i < 100; ++i) {
    const Vec3 x = rng.vec3(3.0);
    const auto exact = phi_jacobian(x);
    const auto fd = fd_jacobian(x);
    for (int c = 0; c < 3; ++c) {
      CHECK(max_abs_diff(exact[c], fd[c]) < 1e-6);
    }
  }
}

TEST_CASE("metric") {
  const Mat3 g0 = metric_g({0, 0, 0});
  CHECK(g0[0][0] == 1.0);
  CHECK(g0[1][1] == 1.0);
  CHECK(g0[2][2] == 2.0);
  const Mat3 gi0 = metric_g_inv({0, 0, 0});
  CHECK(gi0[2][2] == 0.5);

  const Mat3 g1 = metric_g({1, 0, 0});
  CHECK(rel_err(g1[0][0], 1.0 + 1.0 / 3.0) < 1e-15);
  CHECK(g1[1][1] == 1.0);
  CHECK(g1[2][2] == 3.0);

  Sampler rng(113);
  for (int i = 0; i < 200; ++i) {
    const Vec3 x = rng.vec3(4.0);
    // g g^{-1} = identity.
    const Mat3 prod = mat_mul(metric_g(x), metric_g_inv(x));
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        CHECK(std::abs(prod[r][c] - (r == c ? 1.0 : 0.0)) < 1e-12);
      }
    }
    // g = J^T J against the finite-difference Jacobian.
    const auto fd = fd_jacobian(x);
    const Mat3 g = metric_g(x);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        CHECK(std::abs(g[r][c] - inner(fd[r], fd[c])) < 1e-6);
      }
    }
  }
}

TEST_CASE("legendre inverse") {
  const Vec3 y = gamma({0, 0, 0}, {0, 0, 1});
  CHECK(std::abs(y[2] - 0.5) < 1e-15);

  Sampler rng(127);
  for (int i = 0; i < 200; ++i) {
    const Vec3 x = rng.vec3(3.0);
    const Vec3 p = rng.vec3(3.0);
    const Vec3 v = gamma(x, p);
    const Vec3 p_back = mat_vec(metric_g(x), v);
    for (int c = 0; c < 3; ++c) CHECK(std::abs(p_back[c] - p[c]) < 1e-12);
    const Vec3 zero = gamma(x, {0, 0, 0});
    for (int c = 0; c < 3; ++c) CHECK(zero[c] == 0.0);
  }
}

TEST_CASE("invariants in chart coordinates") {
  // X2 = x1 p2 - x2 p1 and X3 = p3 through the chart.
  Sampler rng(131);
  for (int i = 0; i < 200; ++i) {
    const Vec3 x = rng.vec3(3.0);
    const Vec3 p = rng.vec3(3.0);
    const PhaseState s = ambient_from_chart({x, p});
    const Invariants inv = invariants_of(s, 0.7);
    CHECK(std::abs(inv.X2 - (x[0] * p[1] - x[1] * p[0])) < 1e-10);
    CHECK(std::abs(inv.X3 - p[2]) < 1e-10);
    CHECK(rel_err(inv.X1, hamiltonian_chart({x, p}, 0.7)) < 1e-12);
  }
}

TEST_CASE("reduced metric") {
  const Vec3 h1 = metric_h(1.0);
  CHECK(rel_err(h1[0], 0.75) < 1e-15);
  CHECK(h1[1] == 1.0);
  CHECK(rel_err(h1[2], 1.0 / 3.0) < 1e-15);

  const Vec3 h05 = metric_h(0.5);
  CHECK(rel_err(h05[0], 0.9) < 1e-15);
  CHECK(h05[1] == 4.0);
  CHECK(rel_err(h05[2], 1.0 / 2.25) < 1e-15);

  const Vec3 hbig = metric_h(1e6);
  CHECK(std::abs(hbig[0] - 0.5) < 1e-6);
  CHECK(std::abs(hbig[1]) < 1e-6);
  CHECK(std::abs(hbig[2]) < 1e-6);

  CHECK_THROWS_AS(metric_h(0.0), SingularChart);
  CHECK_THROWS_AS(metric_h(-1.0), SingularChart);
}

TEST_CASE("tangent frame matches the reduced metric") {
  Sampler rng(137);
  for (int i = 0; i < 100; ++i) {
    const Vec3 q = {rng.uniform(0.2, 3.0), rng.angle(), rng.angle()};
    const auto T = tangent_frame(q);
    const Vec3 h = metric_h(q[0]);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        CHECK(std::abs(inner(T[a], T[b]) - (a == b ? h[a] : 0.0)) < 1e-12);
      }
    }
    // Columns are tangent at phi(psi(q)).
    const Mat2 A = phi(psi(q));
    for (int a = 0; a < 3; ++a) {
      CHECK(std::abs(tangent_defect(A, T[a])) < 1e-12);
    }
  }
}

TEST_CASE("ambient_to_reduced on rotation data") {
  const ReducedState rs = ambient_to_reduced({kId, kRot});
  CHECK(rs.regime == Regime::X2Zero);
  CHECK(std::abs(rs.q[0]) < 1e-12);
  CHECK(std::abs(rs.xi[2] - 2.0) < 1e-12);  // X3 of (Id, Rot)
}

TEST_CASE("ambient_to_reduced picks the polar chart off the rotations") {
  // B built from xi = (0, 1, 0) at q = (1, 0, 0); X2 = 1 is nonzero.
  const ReducedState in{{1, 0, 0}, {0, 1, 0}, Regime::X2NonZero};
  const PhaseState s = reduced_to_ambient(in);
  const ReducedState back = ambient_to_reduced(s);
  CHECK(back.regime == Regime::X2NonZero);
  CHECK(std::abs(back.q[0] - 1.0) < 1e-12);
  CHECK(std::abs(back.xi[1] - 1.0) < 1e-12);
}

TEST_CASE("reduced/ambient round trips") {
  Sampler rng(139);
  for (int i = 0; i < 200; ++i) {
    ReducedState rs;
    rs.regime = Regime::X2NonZero;
    rs.q = {rng.uniform(0.1, 2.5), rng.angle(), rng.angle()};
    rs.xi = rng.vec3(2.0);
    if (std::abs(rs.xi[1]) < 0.05) rs.xi[1] = 0.05;  // keep X2 away from 0
    const PhaseState s = reduced_to_ambient(rs);
    CHECK(rel_err(0.5 * norm_sq(s.A), 1.0 + rs.q[0] * rs.q[0]) < 1e-12);

    const ReducedState back = ambient_to_reduced(s);
    REQUIRE(back.regime == Regime::X2NonZero);
    CHECK(std::abs(back.q[0] - rs.q[0]) < 1e-9);
    CHECK(angle_diff(back.q[1], rs.q[1]) < 1e-9);
    CHECK(angle_diff(back.q[2], rs.q[2]) < 1e-9);
    for (int c = 0; c < 3; ++c) CHECK(std::abs(back.xi[c] - rs.xi[c]) < 1e-9);

    // The invariants coincide with the reduced momenta.
    const Invariants inv = invariants_of(s, 1.0);
    CHECK(std::abs(inv.X2 - rs.xi[1]) < 1e-10);
    CHECK(std::abs(inv.X3 - rs.xi[2]) < 1e-10);
  }

  // X2 = 0 regime: reconstruction reproduces the ambient pair.
  for (int i = 0; i < 200; ++i) {
    ReducedState rs;
    rs.regime = Regime::X2Zero;
    const double q2 = rng.angle();
    rs.q = {rng.uniform(-2.0, 2.0), q2, rng.angle()};
    rs.xi = {rng.uniform(-2.0, 2.0), q2, rng.uniform(-2.0, 2.0)};
    const PhaseState s = reduced_to_ambient(rs);
    const Invariants inv = invariants_of(s, 1.0);
    CHECK(std::abs(inv.X2) < 1e-10);
    CHECK(std::abs(inv.X3 - rs.xi[2]) < 1e-10);

    const ReducedState back = ambient_to_reduced(s);
    REQUIRE(back.regime == Regime::X2Zero);
    const PhaseState s2 = reduced_to_ambient(back);
    CHECK(max_abs_diff(s2.A, s.A) < 1e-9);
    CHECK(max_abs_diff(s2.B, s.B) < 1e-9);
  }
}

TEST_CASE("rotation states map to q = (0, ., theta)") {
  const PhaseState s = reduced_to_ambient({{0, 0, 1.25}, {0, 0, 0},
                                           Regime::X2Zero});
  CHECK(max_abs_diff(s.A, rotation(1.25)) < 1e-14);
  CHECK(norm(s.B) < 1e-14);
}

TEST_CASE("principal axes from the reconstruction") {
  Sampler rng(149);
  for (int i = 0; i < 100; ++i) {
    ReducedState rs;
    rs.regime = Regime::X2NonZero;
    rs.q = {rng.uniform(0.2, 2.0), rng.angle(), rng.angle()};
    rs.xi = rng.vec3(2.0);
    if (std::abs(rs.xi[1]) < 0.05) rs.xi[1] = 0.05;
    const Mat2 A = reduced_to_ambient(rs).A;

    // Singular values of A (from the eigenvalues of A^T A).
    const Mat2 ata = A.transpose() * A;
    const double tr = trace(ata);
    const double gap = std::sqrt(std::max(0.0, tr * tr - 4.0));
    const double s_max = std::sqrt(0.5 * (tr + gap));
    const double s_min = std::sqrt(0.5 * (tr - gap));

    const double half = 0.5 * norm_sq(A);
    const double plus = std::sqrt(half + 1.0);
    const double minus = std::sqrt(half - 1.0);
    CHECK(std::abs(s_max - (plus + minus) / kSqrt2) < 1e-10);
    CHECK(std::abs(s_min - (plus - minus) / kSqrt2) < 1e-10);
  }
}

TEST_CASE("reduced_to_ambient rejects the chart boundary") {
  CHECK_THROWS_AS(
      reduced_to_ambient({{-0.5, 0, 0}, {0, 1, 0}, Regime::X2NonZero}),
      SingularChart);
}
