#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sl2flow/charts.hpp"
#include "sl2flow/dynamics.hpp"
#include "sl2flow/errors.hpp"
#include "sl2flow/physics.hpp"
#include "sl2flow/random.hpp"
#include "test_support.hpp"

using namespace sl2flow;
using test::max_abs_diff;
using test::rel_err;

TEST_CASE("velocity gradient") {
  CHECK(max_abs_diff(velocity_gradient({kId, kDiag}), kDiag) == 0.0);

  const double w = 1.4, th = 0.6;
  const Mat2 u = rotation(th);
  CHECK(max_abs_diff(velocity_gradient({u, kRot * u * w}), kRot * w) < 1e-14);

  Sampler rng(401);
  for (int i = 0; i < 200; ++i) {
    CHECK(std::abs(trace(velocity_gradient(rng.d_state()))) < 1e-12);
  }
}

TEST_CASE("field samples at distinguished points") {
  // Boundary point of the unit disk: pressure vanishes.
  const FieldSample fs1 = fields_at({kId, kDiag}, 0.0, 0.0, {1.0, 0.0});
  CHECK(fs1.velocity[0] == 1.0);
  CHECK(fs1.velocity[1] == 0.0);
  CHECK(fs1.magnetic[0] == 0.0);
  CHECK(fs1.magnetic[1] == 0.0);
  CHECK(std::abs(fs1.pressure) < 1e-15);
  CHECK(fs1.inside);

  // Pressureless rigid rotation with magnetic field.
  const FieldSample fs2 = fields_at({kId, kRot}, 1.0, 1.0, {0.5, 0.0});
  CHECK(std::abs(fs2.velocity[0]) < 1e-15);
  CHECK(std::abs(fs2.velocity[1] - 0.5) < 1e-15);
  CHECK(std::abs(fs2.magnetic[0]) < 1e-15);
  CHECK(std::abs(fs2.magnetic[1] - 0.5) < 1e-15);
  CHECK(std::abs(fs2.pressure) < 1e-15);

  // Center pressure equals half the multiplier.
  const FieldSample fs3 = fields_at({kId, kDiag}, 0.0, 0.0, {0.0, 0.0});
  CHECK(rel_err(fs3.pressure, 0.5) < 1e-15);

  CHECK_THROWS_AS(fields_at({kId, kDiag}, 1.0, 0.0, {0.0, 0.0}),
                  KappaMismatch);
}

TEST_CASE("pressure vanishes on the moving boundary") {
  Sampler rng(409);
  for (int i = 0; i < 100; ++i) {
    const PhaseState s = rng.d_state();
    const double th = rng.angle();
    // x = A y with |y| = 1 lies on the boundary of the ellipse.
    const Vec2 x = s.A.apply({std::cos(th), std::sin(th)});
    const FieldSample fs = fields_at(s, 1.0, 1.0, x);
    CHECK(std::abs(fs.pressure) < 1e-12);
    CHECK(fs.inside);
  }
}

TEST_CASE("ellipse geometry") {
  const EllipseGeometry disk = ellipse_of(kId);
  CHECK(disk.semi_major == 1.0);
  CHECK(disk.semi_minor == 1.0);
  CHECK(disk.orientation == 0.0);

  const EllipseGeometry e = ellipse_of(phi({1, 0, 0}));
  const double s3 = std::sqrt(3.0), s2 = std::sqrt(2.0);
  CHECK(rel_err(e.semi_major, (s3 + 1.0) / s2) < 1e-12);
  CHECK(rel_err(e.semi_minor, (s3 - 1.0) / s2) < 1e-12);
  CHECK(std::abs(e.orientation) < 1e-12);

  // Rotated stretch: the major axis follows the left rotation factor.
  const Mat2 a = rotation(0.3) * Mat2{2.0, 0, 0, 0.5};
  CHECK(std::abs(ellipse_of(a).orientation - 0.3) < 1e-12);

  Sampler rng(419);
  for (int i = 0; i < 200; ++i) {
    const Mat2 m = rng.sl2(2.0);
    const EllipseGeometry g = ellipse_of(m);
    CHECK(rel_err(g.semi_major * g.semi_minor, 1.0) < 1e-10);
    CHECK(std::abs(g.semi_major * g.semi_major +
                   g.semi_minor * g.semi_minor - norm_sq(m)) < 1e-10);
    CHECK(g.orientation > -1.5707963268);
    CHECK(g.orientation <= 1.5707963268);
  }

  CHECK_THROWS_AS(ellipse_of(Mat2{2, 0, 0, 1}), NotOnManifold);
}

TEST_CASE("divergence identities and the boundary flux") {
  Sampler rng(421);
  for (int i = 0; i < 50; ++i) {
    const PhaseState s = rng.d_state();
    const DivergenceReport rep = divergence_checks(s, 1.0, 1.0, 1000);
    CHECK(std::abs(rep.div_u) < 1e-12);
    CHECK(std::abs(rep.div_b) < 1e-12);
    CHECK(rep.max_boundary_bn < 1e-10);
  }

  // Rigid rotation: the field is tangent to the circle.
  const DivergenceReport rot =
      divergence_checks({kId, kRot}, 1.0, 1.0, 500);
  CHECK(rot.max_boundary_bn < 1e-12);

  CHECK_THROWS_AS(divergence_checks({kId, kRot}, 1.0, 0.3, 10),
                  KappaMismatch);
}

TEST_CASE("center pressure keeps its sign along the motion") {
  Sampler rng(431);
  for (double kappa : {0.0, 1.0}) {
    const double c0 = std::sqrt(kappa);
    const PhaseState init = rng.d_state();
    const Trajectory traj = integrate(init, kappa, linspace(0.0, 40.0, 161));
    const double first = fields_at(init, kappa, c0, {0.0, 0.0}).pressure;
    const bool taylor = first > 0.0;
    for (const auto& smp : traj.samples) {
      const double p = fields_at(smp.state, kappa, c0, {0.0, 0.0}).pressure;
      CHECK(rel_err(p, 0.5 * smp.lambda) < 1e-12);
      if (std::abs(p) > 1e-10) {
        CHECK((p > 0.0) == taylor);
      }
    }
  }
}
